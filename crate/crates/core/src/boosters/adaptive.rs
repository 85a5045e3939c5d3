/// Consecutive-failure counter driving the adaptive error goal.
///
/// A failure is a stuck round or a solver failure. Once the count exceeds
/// `max_tries` the goal rises by `increment` and the count resets; a
/// successful round also resets it.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveEpsilon {
    epsilon: f64,
    increment: f64,
    max_tries: usize,
    failures: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonDecision {
    /// Keep going at the current goal.
    Continue,
    /// The goal was raised to this value.
    Raised(f64),
    /// The next goal would reach 1/2.
    Exhausted,
}

impl AdaptiveEpsilon {
    pub fn new(epsilon: f64, increment: f64, max_tries: usize) -> Self {
        Self { epsilon, increment, max_tries, failures: 0 }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    pub fn success(&mut self) {
        self.failures = 0;
    }

    pub fn failure(&mut self) -> EpsilonDecision {
        self.failures += 1;
        if self.failures <= self.max_tries {
            return EpsilonDecision::Continue;
        }
        self.failures = 0;
        let next = self.epsilon + self.increment;
        if next >= 0.5 {
            return EpsilonDecision::Exhausted;
        }
        // keep the grid exact: 0.01, 0.02, ... rather than accumulated sums
        self.epsilon = (next / self.increment).round() * self.increment;
        if (self.epsilon - next).abs() > 1e-9 {
            self.epsilon = next;
        }
        EpsilonDecision::Raised(self.epsilon)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_failures_raise_by_one_increment() {
        let mut a = AdaptiveEpsilon::new(0.0, 0.01, 3);
        for _ in 0..3 {
            assert_eq!(a.failure(), EpsilonDecision::Continue);
        }
        assert_eq!(a.failure(), EpsilonDecision::Raised(0.01));
        assert_eq!(a.failures(), 0);
    }

    #[test]
    fn success_resets_counter() {
        let mut a = AdaptiveEpsilon::new(0.1, 0.01, 3);
        a.failure();
        a.success();
        assert_eq!(a.failures(), 0);
        for _ in 0..3 {
            assert_eq!(a.failure(), EpsilonDecision::Continue);
        }
    }

    #[test]
    fn stops_before_half() {
        let mut a = AdaptiveEpsilon::new(0.49, 0.01, 1);
        a.failure();
        assert_eq!(a.failure(), EpsilonDecision::Exhausted);
    }

    #[test]
    fn grid_stays_exact() {
        let mut a = AdaptiveEpsilon::new(0.0, 0.01, 0);
        for _ in 0..30 {
            a.failure();
        }
        assert_eq!(a.epsilon(), 0.3);
    }
}
