//! Closed-form tail bounds for the max load of random linear maps.
//!
//! All logarithms are base 2. `log2(1) = 0`, so `b = 1` is accepted wherever
//! `log b` appears. Each bound is returned raw and clamped to `[0, 1]`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundValue {
    pub raw: f64,
    pub clamped: f64,
    /// `raw ≥ 1`: the bound says nothing.
    pub vacuous: bool,
}

impl BoundValue {
    fn new(raw: f64) -> Self {
        Self { raw, clamped: raw.clamp(0.0, 1.0), vacuous: raw >= 1.0 }
    }
}

fn open_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must lie in (0, 1), got {x}")))
    }
}

fn at_least_one(name: &str, x: u32) -> Result<()> {
    if x >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be >= 1")))
    }
}

/// `c_ε = 4·(2/ε)^(8/ε)`.
pub fn c_epsilon(eps: f64) -> Result<f64> {
    open_unit("epsilon", eps)?;
    let exponent = 8.0 / eps;
    // Integral exponents go through repeated multiplication so that
    // powers of two stay exact.
    if exponent.fract() == 0.0 && exponent <= i32::MAX as f64 {
        Ok(4.0 * (2.0 / eps).powi(exponent as i32))
    } else {
        Ok(4.0 * (2.0 / eps).powf(exponent))
    }
}

/// Miss probability for a surjective map and a set of density `1 − α`:
/// `α^(u − t − log t + log log (1/α))`.
pub fn bound_surjective_miss(u: u32, t: u32, alpha: f64) -> Result<BoundValue> {
    at_least_one("t", t)?;
    if t >= u {
        return Err(Error::InvalidArgument(format!("need t < u, got t={t}, u={u}")));
    }
    open_unit("alpha", alpha)?;
    let exponent = u as f64 - t as f64 - (t as f64).log2() + (1.0 / alpha).log2().log2();
    Ok(BoundValue::new(alpha.powf(exponent)))
}

/// `P[E₂] ≤ μ^(−log b − log μ + log log (1/μ))` with `μ = 2^(b−f)`.
pub fn bound_e2(b: u32, f: u32) -> Result<BoundValue> {
    at_least_one("b", b)?;
    if f <= b {
        return Err(Error::InvalidArgument(format!("need f > b, got f={f}, b={b}")));
    }
    let gap = (f - b) as f64;
    let exponent = -(b as f64).log2() + gap + gap.log2();
    // log2 μ = −gap; evaluated in the exponent to avoid underflow.
    Ok(BoundValue::new((-gap * exponent).exp2()))
}

/// `P[lbin ≥ 2·c_ε·r] ≤ (1/(1−ε))·x^(−log b − log x + log log (r / log r))`
/// with `x = log r / r`.
pub fn bound_tail(b: u32, r: f64, eps: f64) -> Result<BoundValue> {
    at_least_one("b", b)?;
    check_r(r)?;
    open_unit("epsilon", eps)?;
    let x_log = r.log2().log2() - r.log2();
    let exponent = tail_exponent(b, r);
    Ok(BoundValue::new((x_log * exponent).exp2() / (1.0 - eps)))
}

/// The exponent of [`bound_tail`]: `−log b − log x + log log (r / log r)`.
pub fn tail_exponent(b: u32, r: f64) -> f64 {
    let log_r = r.log2();
    -(b as f64).log2() + log_r - log_r.log2() + (log_r - log_r.log2()).log2()
}

/// Smallest `k ≤ max_log_r` with `tail_exponent(b, 2^k) ≥ log 3`, the point
/// from which the tail bound decays at least as fast as `((log r)/r)^(log 3)`.
pub fn tail_exponent_onset(b: u32, max_log_r: u32) -> Option<u32> {
    let target = 3f64.log2();
    (2..=max_log_r).find(|&k| tail_exponent(b, (k as f64).exp2()) >= target)
}

fn check_r(r: f64) -> Result<()> {
    if r >= 4.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("r must be >= 4, got {r}")))
    }
}

/// Smallest `ℓ` for which a heavy bin forces a covered fiber:
/// `c_ε·(f − b)·2^(f − b)`.
pub fn ell_threshold(eps: f64, f: u32, b: u32) -> Result<f64> {
    if f < b {
        return Err(Error::InvalidArgument(format!("need f >= b, got f={f}, b={b}")));
    }
    let gap = (f - b) as i32;
    Ok(c_epsilon(eps)? * gap as f64 * 2f64.powi(gap))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailParameters {
    pub f: u32,
    pub ell: f64,
    pub threshold: f64,
}

/// `f = ⌊b + log r − log log r + 1⌋` and `ℓ = ⌈2·c_ε·r⌉`.
///
/// Fails with a precondition error unless `f > b` and `ℓ ≥ ell_threshold`.
pub fn theorem2_f_and_ell(b: u32, r: f64, eps: f64) -> Result<TailParameters> {
    at_least_one("b", b)?;
    check_r(r)?;
    let log_r = r.log2();
    let f = (b as f64 + log_r - log_r.log2() + 1.0).floor() as u32;
    let ell = (2.0 * c_epsilon(eps)? * r).ceil();
    if f <= b {
        return Err(Error::Precondition(format!("f = {f} is not above b = {b}")));
    }
    let threshold = ell_threshold(eps, f, b)?;
    if ell < threshold {
        return Err(Error::Precondition(format!("ell = {ell} is below the threshold {threshold} at b={b}, r={r}")));
    }
    Ok(TailParameters { f, ell, threshold })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn c_epsilon_values() {
        assert_eq!(c_epsilon(0.5).unwrap(), 17_179_869_184.0);
        assert!(close(c_epsilon(0.8).unwrap(), 38_146.972_656_25, 1e-9));
        assert!(c_epsilon(0.25).unwrap() > c_epsilon(0.5).unwrap());
        assert!(c_epsilon(0.0).is_err());
        assert!(c_epsilon(1.0).is_err());
    }

    #[test]
    fn surjective_miss_values() {
        let v = bound_surjective_miss(10, 4, 0.5).unwrap();
        assert!(close(v.raw, 0.0625, 1e-12));
        assert!(!v.vacuous);
        let v = bound_surjective_miss(8, 2, 0.25).unwrap();
        assert!(close(v.raw, 0.25f64.powi(6), 1e-12));
        let v = bound_surjective_miss(10, 4, 0.999_999).unwrap();
        assert!(v.vacuous);
        assert_eq!(v.clamped, 1.0);
        assert!(bound_surjective_miss(4, 4, 0.5).is_err());
    }

    #[test]
    fn e2_values() {
        assert!(close(bound_e2(8, 11).unwrap().raw, 1.0 / 27.0, 1e-12));
        assert!(close(bound_e2(16, 22).unwrap().raw, 5.232_780_885_631e-9, 1e-9));
        let v = bound_e2(2, 3).unwrap();
        assert_eq!(v.raw, 1.0);
        assert!(v.vacuous);
        assert!(bound_e2(4, 4).is_err());
    }

    #[test]
    fn e2_matches_surjective_miss_at_mu() {
        for b in 1..10 {
            for f in b + 1..b + 12 {
                let mu = 2f64.powi(b as i32 - f as i32);
                let via_miss = bound_surjective_miss(f, b, mu).unwrap().raw;
                assert!(close(bound_e2(b, f).unwrap().raw, via_miss, 1e-9), "b={b} f={f}");
            }
        }
    }

    #[test]
    fn tail_values() {
        assert!(close(bound_tail(8, 16.0, 0.5).unwrap().raw, 2.0, 1e-12));
        assert!(close(bound_tail(8, 256.0, 0.5).unwrap().raw, 6.25e-7, 1e-9));
        assert!(bound_tail(8, 3.9, 0.5).is_err());
    }

    #[test]
    fn tail_non_increasing_beyond_two_to_b() {
        for b in 2..=12u32 {
            let start = 2f64.powi(b as i32);
            let mut prev = f64::INFINITY;
            for i in 0..200 {
                let r = start * 1.05f64.powi(i);
                let v = bound_tail(b, r, 0.5).unwrap().raw;
                assert!(v <= prev * (1.0 + 1e-12), "b={b} r={r}");
                prev = v;
            }
        }
    }

    #[test]
    fn threshold_values() {
        assert_eq!(ell_threshold(0.5, 7, 7).unwrap(), 0.0);
        assert_eq!(ell_threshold(0.5, 11, 8).unwrap(), 24.0 * 17_179_869_184.0);
        let mut prev = -1.0;
        for f in 4..20 {
            let t = ell_threshold(0.3, f, 4).unwrap();
            assert!(t > prev);
            prev = t;
        }
    }

    #[test]
    fn tail_parameters() {
        assert_eq!(theorem2_f_and_ell(8, 16.0, 0.5).unwrap().f, 11);
        let p = theorem2_f_and_ell(8, 4.0, 0.5).unwrap();
        assert_eq!(p.f, 10);
        // At r = 4 the chain is tight: ℓ = 8·c_ε = threshold.
        assert_eq!(p.ell, p.threshold);
    }

    #[test]
    fn exponent_of_tail() {
        // At b = 8, r = 16 the exponent vanishes.
        assert!(tail_exponent(8, 16.0).abs() < 1e-12);
        assert_eq!(tail_exponent_onset(8, 64), Some(6));
        assert_eq!(tail_exponent_onset(8, 5), None);
        assert!(tail_exponent(8, 32.0) < 3f64.log2() && tail_exponent(8, 64.0) >= 3f64.log2());
    }
}
