//! The covering event `E₂` and its relation to the max-load event `E₁`.
//!
//! For `T0: GF(2)^u → GF(2)^f` and surjective `T1: GF(2)^f → GF(2)^b`, `E₂`
//! holds when some fiber `T1⁻¹(y)` lies entirely inside `T0(S)`. Equivalently,
//! `T1` applied to the complement `GF(2)^f \ T0(S)` misses some `y`.

use std::collections::HashSet;

use super::bins::bin_counts;
use super::sets::BallSet;
use crate::error::{check_dim, Error, Result};
use crate::gf2::{compose, AffineSubspace, Gf2Vector, LinearMap, PackedMap};

/// Largest intermediate dimension `f` for which `E₂` is evaluated; the
/// check touches all `2^f` points.
pub const E2_MAX_F: usize = 24;

struct E2Inputs {
    inner: PackedMap,
    outer: PackedMap,
}

fn check_e2_inputs(s: &BallSet, t0: &LinearMap, t1: &LinearMap) -> Result<E2Inputs> {
    check_dim(t0.in_dim(), s.universe_dim())?;
    check_dim(t1.in_dim(), t0.out_dim())?;
    if !t0.is_linear() || !t1.is_linear() {
        return Err(Error::Precondition("E2 expects linear T0 and T1".into()));
    }
    let f = t1.in_dim();
    if f > E2_MAX_F {
        return Err(Error::TooLarge { what: "E2 evaluation", log2_size: f, limit: E2_MAX_F });
    }
    if !t1.is_surjective() {
        return Err(Error::Precondition("T1 must be surjective".into()));
    }
    let inner = t0.packed().ok_or(Error::TooLarge {
        what: "E2 evaluation (universe wider than 64 bits)",
        log2_size: t0.in_dim(),
        limit: 64,
    })?;
    Ok(E2Inputs { inner, outer: t1.packed().expect("f <= 24") })
}

fn image_bitmap(s: &BallSet, inner: &PackedMap) -> Vec<bool> {
    let mut hit = vec![false; 1 << inner.out_dim];
    for &x in s.packed().expect("universe fits in a word") {
        hit[inner.apply(x) as usize] = true;
    }
    hit
}

/// `E₂(S, T0, T1)` via the complement identity: mark `T1(z)` for every `z`
/// outside `T0(S)`, then look for an unmarked label.
pub fn event_e2(s: &BallSet, t0: &LinearMap, t1: &LinearMap) -> Result<bool> {
    let E2Inputs { inner, outer } = check_e2_inputs(s, t0, t1)?;
    let image = image_bitmap(s, &inner);
    let mut reached = vec![false; 1 << outer.out_dim];
    for (z, &in_image) in image.iter().enumerate() {
        if !in_image {
            reached[outer.apply(z as u64) as usize] = true;
        }
    }
    Ok(reached.iter().any(|&r| !r))
}

/// `E₂(S, T0, T1)` straight from the definition: enumerate each fiber
/// `T1⁻¹(y) = z_y + Ker(T1)` and test it for containment in `T0(S)`.
pub fn event_e2_by_fibers(s: &BallSet, t0: &LinearMap, t1: &LinearMap) -> Result<bool> {
    check_e2_inputs(s, t0, t1)?;
    let image: HashSet<Gf2Vector> = s.members().iter().map(|x| t0.apply_unchecked(x)).collect();
    let kernel = t1.kernel_basis();
    for y in Gf2Vector::all(t1.out_dim()) {
        let base = t1.solve(&y).expect("T1 is surjective");
        let fiber = AffineSubspace { offset: base, directions: kernel.clone() };
        if fiber.members()?.iter().all(|z| image.contains(z)) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// One label `y` with at least `ell` balls under `T = T1 ∘ T0`.
#[derive(Debug, Clone)]
pub struct Witness {
    pub label: Gf2Vector,
    /// `U_A = T⁻¹(y)`.
    pub preimage: AffineSubspace,
    /// `S_A = S ∩ U_A`.
    pub balls: Vec<Gf2Vector>,
    /// `F_A = T1⁻¹(y)`.
    pub fiber: Vec<Gf2Vector>,
    /// Whether `T0(S_A) ⊇ F_A`.
    pub fiber_covered: bool,
}

#[derive(Debug, Clone)]
pub struct ImplicationReport {
    pub ell: usize,
    pub e1: bool,
    pub e2: bool,
    pub witnesses: Vec<Witness>,
    /// Witnesses whose fiber is covered while `E₂` is false.
    pub violations: usize,
}

impl ImplicationReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Checks, for every heavy bin of `T = T1 ∘ T0`, that covering its fiber by
/// `T0(S_A)` forces `E₂`.
pub fn check_e1_e2_implication(s: &BallSet, t0: &LinearMap, t1: &LinearMap, ell: usize) -> Result<ImplicationReport> {
    check_e2_inputs(s, t0, t1)?;
    let t = compose(t1, t0)?;
    let e2 = event_e2(s, t0, t1)?;
    let hist = bin_counts(&t, s)?;
    let kernel = t.kernel_basis();
    let kernel1 = t1.kernel_basis();

    let mut witnesses = Vec::new();
    for (label, &count) in &hist.counts {
        if count < ell {
            continue;
        }
        let preimage = AffineSubspace {
            offset: t.solve(label).expect("occupied label is in the image"),
            directions: kernel.clone(),
        };
        let balls: Vec<Gf2Vector> = s.members().iter().filter(|x| t.apply_unchecked(x) == *label).cloned().collect();
        let fiber = AffineSubspace { offset: t1.solve(label).expect("T1 is surjective"), directions: kernel1.clone() }
            .members()?;
        let covered: HashSet<Gf2Vector> = balls.iter().map(|x| t0.apply_unchecked(x)).collect();
        let fiber_covered = fiber.iter().all(|z| covered.contains(z));
        witnesses.push(Witness { label: label.clone(), preimage, balls, fiber, fiber_covered });
    }
    let violations = witnesses.iter().filter(|w| w.fiber_covered && !e2).count();
    Ok(ImplicationReport { ell, e1: !witnesses.is_empty(), e2, witnesses, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballsbins::{generate_set, SetKind};
    use crate::gf2::{sample_surjective, sample_uniform_linear};
    use crate::rng;
    use rand::Rng;

    #[test]
    fn full_image_gives_e2() {
        let s = BallSet::universe(4).unwrap();
        let mut r = rng::master(1);
        let t0 = sample_surjective(4, 3, &mut r).unwrap();
        let t1 = sample_surjective(3, 2, &mut r).unwrap();
        assert!(event_e2(&s, &t0, &t1).unwrap());
        assert!(event_e2_by_fibers(&s, &t0, &t1).unwrap());
    }

    #[test]
    fn singleton_never_covers_a_fiber() {
        let s = BallSet::new(5, vec![Gf2Vector::zeros(5)]).unwrap();
        let mut r = rng::master(2);
        for _ in 0..20 {
            let t0 = sample_uniform_linear(5, 3, &mut r).unwrap();
            let t1 = sample_surjective(3, 2, &mut r).unwrap();
            assert!(!event_e2(&s, &t0, &t1).unwrap());
        }
    }

    #[test]
    fn two_routes_agree() {
        let mut r = rng::master(3);
        for _ in 0..2000 {
            let size = r.gen_range(1..=16);
            let s = generate_set(SetKind::Random, 4, size, &mut r).unwrap();
            let t0 = sample_uniform_linear(4, 3, &mut r).unwrap();
            let t1 = sample_surjective(3, 2, &mut r).unwrap();
            assert_eq!(event_e2(&s, &t0, &t1).unwrap(), event_e2_by_fibers(&s, &t0, &t1).unwrap());
        }
    }

    #[test]
    fn implication_on_full_universe() {
        let s = BallSet::universe(3).unwrap();
        let mut r = rng::master(4);
        for _ in 0..50 {
            let t0 = sample_surjective(3, 2, &mut r).unwrap();
            let t1 = sample_surjective(2, 1, &mut r).unwrap();
            let report = check_e1_e2_implication(&s, &t0, &t1, 2).unwrap();
            assert!(report.e1);
            assert!(report.holds());
            // T0 onto GF(2)^2 covers every fiber.
            assert!(report.witnesses.iter().all(|w| w.fiber_covered));
            for w in &report.witnesses {
                assert_eq!(w.fiber.len(), 2);
                assert!(w.balls.iter().all(|x| w.preimage.contains(x)));
            }
        }
    }

    #[test]
    fn no_heavy_bin_is_vacuous() {
        let s = BallSet::universe(3).unwrap();
        let t0 = LinearMap::identity(3);
        let t1 = LinearMap::identity(3);
        let report = check_e1_e2_implication(&s, &t0, &t1, 2).unwrap();
        assert!(!report.e1);
        assert!(report.witnesses.is_empty());
        assert!(report.holds());
    }

    #[test]
    fn preconditions() {
        let s = BallSet::universe(3).unwrap();
        let t0 = LinearMap::identity(3);
        assert!(matches!(event_e2(&s, &t0, &LinearMap::zero(3, 2)), Err(Error::Precondition(_))));
        let big = LinearMap::zero(3, 25);
        let t1 = LinearMap::from_rows(25, vec![Gf2Vector::unit(25, 0)]).unwrap();
        assert!(matches!(event_e2(&s, &big, &t1), Err(Error::TooLarge { .. })));
    }
}
