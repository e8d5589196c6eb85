//! Randomized verification of the sign inequalities behind the variation
//! argument.
//!
//! The first-variation machinery in [`crate::variation`] turns area
//! comparisons between conic blends into sign conditions on the closed-form
//! rate coefficients `A`, `B`, `C` and on two weighted combinations of them
//! that arise for half-turn configurations. Every check here draws random
//! admissible parameters, evaluates the exact quantity that must stay
//! negative (strictly or weakly), and reports the violation count together
//! with the first counterexample found, if any.
//!
//! A clean report over many samples is evidence that the implemented
//! formulas have the right signs on their stated domains — it catches
//! transcription slips, wrong normalizations, and inverted hypotheses. It is
//! not a proof, and the checks deliberately re-evaluate the inequalities
//! through the public coefficient API rather than through any rearranged
//! private form, so a sign error cannot hide by cancelling against itself.
//!
//! The thresholds in the hypotheses matter. `b_below_a` and everything
//! downstream of it require the smaller eigenvalue to exceed the critical
//! parameter `v0` from [`crate::uniqueness`]; sampling below that threshold
//! produces genuine violations (see the unit tests), which is exactly why
//! the certified solver regime is restricted the way it is.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::scalar::Real;
use crate::uniqueness::cached_v0_radius;
use crate::variation::abc_coefficients;

/// Default number of random samples per check.
pub const DEFAULT_SUITE_SAMPLES: usize = 10_000;

/// Default seed for the sampling stream.
pub const DEFAULT_SUITE_SEED: u64 = 42;

/// One offending sample: named parameters and the value of the left-hand
/// side that was required to be negative (or non-positive) but was not.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample<T> {
    pub params: Vec<(&'static str, T)>,
    pub value: T,
}

/// Outcome of one randomized inequality check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport<T> {
    /// Which inequality was sampled.
    pub name: &'static str,
    /// `true` when the requirement is strict (`< 0`); `false` for `<= 0`.
    pub strict: bool,
    /// Number of samples drawn.
    pub samples: usize,
    /// Number of samples violating the requirement.
    pub violations: usize,
    /// Largest left-hand side seen over all samples: the closest approach to
    /// a violation. Negative means every sample satisfied the inequality
    /// with room to spare.
    pub worst_value: T,
    /// The first violating sample, if there was one.
    pub first_counterexample: Option<Counterexample<T>>,
}

impl<T: Real> CheckReport<T> {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Run one check: draw `samples` times, test the drawn value against zero.
fn run_check<T: Real>(
    name: &'static str,
    strict: bool,
    samples: usize,
    rng: &mut ChaCha8Rng,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Result<(T, Vec<(&'static str, T)>)>,
) -> Result<CheckReport<T>> {
    let mut violations = 0;
    let mut worst_value = T::neg_infinity();
    let mut first_counterexample = None;
    for _ in 0..samples {
        let (value, params) = draw(rng)?;
        if value > worst_value {
            worst_value = value;
        }
        let violated = if strict {
            !(value < T::zero())
        } else {
            value > T::zero()
        };
        if violated {
            violations += 1;
            if first_counterexample.is_none() {
                first_counterexample = Some(Counterexample { params, value });
            }
        }
    }
    Ok(CheckReport {
        name,
        strict,
        samples,
        violations,
        worst_value,
        first_counterexample,
    })
}

/// Log-uniform draw from `[lo, hi]` (draws in f64, the sampling space).
fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// Eigenvalue pair with `nu1 > nu2 > 0`: the smaller eigenvalue is
/// log-uniform over several decades and the gap ratio spans tiny (1e-3,
/// where the coefficients nearly cancel) through huge (1e3).
fn draw_pair(rng: &mut ChaCha8Rng, nu2_lo: f64, nu2_hi: f64) -> (f64, f64) {
    let nu2 = log_uniform(rng, nu2_lo, nu2_hi);
    let gap_ratio = log_uniform(rng, 1e-3, 1e3);
    (nu2 * (1.0 + gap_ratio), nu2)
}

/// Eigenvalue pair with `nu2 > v0`, approaching the threshold to within a
/// 1e-3 relative margin (tighter sampling would drown the genuine sign
/// margin, which vanishes linearly at the threshold, in roundoff).
fn draw_pair_above_v0(rng: &mut ChaCha8Rng, v0: f64) -> (f64, f64) {
    let nu2 = v0 * (1.0 + log_uniform(rng, 1e-3, 1e2));
    let gap_ratio = log_uniform(rng, 1e-3, 1e3);
    (nu2 * (1.0 + gap_ratio), nu2)
}

/// Uniform unit vector, components swapped so that `r3^2 >= r1^2` (the
/// half-turn axis can always be chosen this way: of the two midpoints of the
/// centers, take the one closer to the pole).
fn draw_axis(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).max(0.0).sqrt();
    let (mut r1, r2, mut r3) = (s * phi.cos(), s * phi.sin(), z);
    if r1 * r1 > r3 * r3 {
        std::mem::swap(&mut r1, &mut r3);
    }
    [r1, r2, r3]
}

fn coef_params<T: Real>(nu1: f64, nu2: f64) -> Vec<(&'static str, T)> {
    vec![
        ("nu01", T::from_f64(nu1)),
        ("nu02", T::from_f64(nu2)),
    ]
}

/// Run the whole inequality suite: `samples` draws per check, all sampling
/// from a single ChaCha8 stream seeded with `seed`. Reports come back in a
/// fixed order; a rerun with the same arguments reproduces them exactly.
///
/// The suite contains, for the rate coefficients `A`, `B`, `C` of
/// [`abc_coefficients`]:
///
/// - `coef_c_negative`: `C < 0` for any `nu01 > nu02 > 0`;
/// - `coef_a_below_c`: `A < C` on the same domain;
/// - `coef_b_below_a`: `B < A`, which additionally needs `nu02 > v0`;
/// - `coef_chain_ordered`: the combined ordering `B < A < C < 0` under
///   `nu01 > nu02 > v0`;
/// - `halfturn_axis_combination`: for a unit axis `r` with
///   `r3^2 >= r1^2`, `(2B - A - C) r3^2 + (A - C)(r2^2 - r1^2) <= 0`
///   under `nu02 > v0`;
/// - `halfturn_nested_combination`: for eigenvalues `nu11 >= nu12` nested
///   strictly between `nu02` and `nu01`,
///   `r1^2 r2^2 (C - A)(nu11 - nu12) + r1^2 r3^2 (B - C)(1 + nu12)
///    + r2^2 r3^2 (B - A)(1 + nu11) <= 0` under the same hypotheses.
pub fn run_inequality_suite<T: Real>(samples: usize, seed: u64) -> Result<Vec<CheckReport<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v0 = cached_v0_radius().0;
    let mut reports = Vec::with_capacity(6);

    reports.push(run_check("coef_c_negative", true, samples, &mut rng, |rng| {
        let (nu1, nu2) = draw_pair(rng, 1e-2, 1e2);
        let abc = abc_coefficients::<T>(T::from_f64(nu1), T::from_f64(nu2))?;
        Ok((abc.c, coef_params(nu1, nu2)))
    })?);

    reports.push(run_check("coef_a_below_c", true, samples, &mut rng, |rng| {
        let (nu1, nu2) = draw_pair(rng, 1e-2, 1e2);
        let abc = abc_coefficients::<T>(T::from_f64(nu1), T::from_f64(nu2))?;
        Ok((abc.a - abc.c, coef_params(nu1, nu2)))
    })?);

    reports.push(run_check("coef_b_below_a", true, samples, &mut rng, |rng| {
        let (nu1, nu2) = draw_pair_above_v0(rng, v0);
        let abc = abc_coefficients::<T>(T::from_f64(nu1), T::from_f64(nu2))?;
        Ok((abc.b - abc.a, coef_params(nu1, nu2)))
    })?);

    reports.push(run_check("coef_chain_ordered", true, samples, &mut rng, |rng| {
        let (nu1, nu2) = draw_pair_above_v0(rng, v0);
        let abc = abc_coefficients::<T>(T::from_f64(nu1), T::from_f64(nu2))?;
        let value = (abc.b - abc.a).max(abc.a - abc.c).max(abc.c);
        Ok((value, coef_params(nu1, nu2)))
    })?);

    reports.push(run_check(
        "halfturn_axis_combination",
        false,
        samples,
        &mut rng,
        |rng| {
            let (nu1, nu2) = draw_pair_above_v0(rng, v0);
            let [r1, r2, r3] = draw_axis(rng);
            let abc = abc_coefficients::<T>(T::from_f64(nu1), T::from_f64(nu2))?;
            let (sq1, sq2, sq3) = (
                T::from_f64(r1 * r1),
                T::from_f64(r2 * r2),
                T::from_f64(r3 * r3),
            );
            let two = T::from_f64(2.0);
            let value = (two * abc.b - abc.a - abc.c) * sq3 + (abc.a - abc.c) * (sq2 - sq1);
            let mut params = coef_params(nu1, nu2);
            params.push(("r1", T::from_f64(r1)));
            params.push(("r2", T::from_f64(r2)));
            params.push(("r3", T::from_f64(r3)));
            Ok((value, params))
        },
    )?);

    reports.push(run_check(
        "halfturn_nested_combination",
        false,
        samples,
        &mut rng,
        |rng| {
            let (nu1, nu2) = draw_pair_above_v0(rng, v0);
            let [r1, r2, r3] = draw_axis(rng);
            // Blend eigenvalues nest strictly between the endpoint pair.
            let u = rng.gen_range(1e-6..1.0f64);
            let w = rng.gen_range(1e-6..1.0f64);
            let (hi, lo) = (u.max(w), u.min(w));
            let nu11 = nu2 + hi * (nu1 - nu2);
            let nu12 = nu2 + lo * (nu1 - nu2);
            let abc = abc_coefficients::<T>(T::from_f64(nu1), T::from_f64(nu2))?;
            let (sq1, sq2, sq3) = (
                T::from_f64(r1 * r1),
                T::from_f64(r2 * r2),
                T::from_f64(r3 * r3),
            );
            let one = T::one();
            let (n11, n12) = (T::from_f64(nu11), T::from_f64(nu12));
            let value = sq1 * sq2 * (abc.c - abc.a) * (n11 - n12)
                + sq1 * sq3 * (abc.b - abc.c) * (one + n12)
                + sq2 * sq3 * (abc.b - abc.a) * (one + n11);
            let mut params = coef_params(nu1, nu2);
            params.push(("nu11", n11));
            params.push(("nu12", n12));
            params.push(("r1", T::from_f64(r1)));
            params.push(("r2", T::from_f64(r2)));
            params.push(("r3", T::from_f64(r3)));
            Ok((value, params))
        },
    )?);

    Ok(reports)
}
