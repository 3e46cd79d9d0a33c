//! Shared fixtures for the criterion benches.

use igklo_core::cartan::instance;
use igklo_core::gklo::Model;

/// Rank-1 model with data `(mu, lambda, m, theta)`.
pub fn rank1(mu: i64, lambda: i64, m: i64, theta: i64) -> Model {
    Model::new(instance(&[], &[(mu, lambda, m, theta)]).expect("valid rank-1 instance"))
}

/// The A2 instance with `m = (2, 1)`, `lambda = (3, 0)`.
pub fn a2() -> Model {
    Model::new(instance(&[(0, 1)], &[(0, 3, 2, 0), (0, 0, 1, 0)]).expect("valid A2 instance"))
}
