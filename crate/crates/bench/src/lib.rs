//! Benchmark fixtures shared by the criterion suites.

use boolezeta_core::dynamics::{OrbitConfig, StartDistribution, TransformParams};
use boolezeta_core::special::{Family, TargetFunction};
use num_complex::Complex64;

pub fn zeta(k: u32) -> TargetFunction {
    TargetFunction::new(Family::RiemannZeta, k)
}

pub fn hurwitz_third(k: u32) -> TargetFunction {
    TargetFunction::new(Family::hurwitz(1.0 / 3.0).expect("a in (0, 1]"), k)
}

pub fn orbit_config(n: usize) -> OrbitConfig {
    OrbitConfig::new(TransformParams::standard(), n, 1, StartDistribution::default()).expect("valid orbit")
}

/// Points on both sides of the pole and high on the critical line.
pub fn sample_points() -> [(&'static str, Complex64); 3] {
    [
        ("right", Complex64::new(2.0, 0.5)),
        ("strip", Complex64::new(0.35, 0.7)),
        ("critical_t100", Complex64::new(0.5, 100.0)),
    ]
}
