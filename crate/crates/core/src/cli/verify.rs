//! Small-dimension verification suite. Each check draws from its own
//! substream, so running one check alone reproduces its suite result.

use rand::Rng;
use serde_json::json;

use super::args::VerifyArgs;
use super::output::Table;
use super::Outcome;
use crate::ballsbins::{
    check_e1_e2_implication, event_e2, event_e2_by_fibers, generate_set, pairwise_independence_check,
    subspace_structure, SetKind,
};
use crate::error::{guard, Error, Result};
use crate::gf2::{
    compose, count_factorizations, factor_set_size, kernel_map_count, sample_surjective, sample_uniform_linear,
    Gf2Vector, LinearMap,
};
use crate::rng::{self, ExperimentRng};
use crate::stats;

pub const CHECKS: &[&str] = &[
    "composition-pointwise",
    "composition-uniformity",
    "factorization-count",
    "e2-equivalence",
    "pairwise",
    "subspace",
    "implication",
];

const COLUMNS: &[&str] = &["check", "status", "instances", "failures", "detail"];

/// Dimension caps for randomly drawn E₂ and implication instances.
const RANDOM_MAX: (usize, usize, usize) = (5, 4, 3);
/// Universe and subspace dimension (= bin dimension) of the subspace check.
const SUBSPACE_DIMS: (usize, usize) = (8, 4);

struct CheckResult {
    instances: u64,
    failures: u64,
    detail: String,
}

struct Dims {
    u: usize,
    f: usize,
    b: usize,
    samples: u64,
    instances: usize,
    fault: bool,
}

/// All maps `GF(2)^in → GF(2)^out`, as packed-row indices.
fn all_maps(in_dim: usize, out_dim: usize) -> impl Iterator<Item = LinearMap> {
    let mask = (1u64 << in_dim) - 1;
    (0..1u64 << (in_dim * out_dim)).map(move |m| {
        let rows: Vec<u64> = (0..out_dim).map(|i| (m >> (i * in_dim)) & mask).collect();
        LinearMap::from_packed_rows(in_dim, &rows).expect("rows fit")
    })
}

fn map_index(t: &LinearMap) -> usize {
    let p = t.packed().expect("small map");
    p.rows.iter().enumerate().map(|(i, &r)| (r as usize) << (i * p.in_dim)).sum()
}

fn composed(t1: &LinearMap, t0: &LinearMap, fault: bool) -> Result<LinearMap> {
    let c = compose(t1, t0)?;
    Ok(if fault { c.with_flipped_entry(0, 0) } else { c })
}

fn composition_pointwise(d: &Dims, r: &mut ExperimentRng) -> Result<CheckResult> {
    guard("composition pointwise check", d.u)?;
    let instances = 100;
    let mut failures = 0;
    for _ in 0..instances {
        let t0 = sample_uniform_linear(d.u, d.f, r)?;
        let t1 = sample_uniform_linear(d.f, d.b, r)?;
        let c = composed(&t1, &t0, d.fault)?;
        let bad = Gf2Vector::all(d.u).any(|x| c.apply(&x).ok() != t0.apply(&x).and_then(|y| t1.apply(&y)).ok());
        failures += bad as u64;
    }
    Ok(CheckResult { instances, failures, detail: format!("u={} f={} b={}; all 2^u inputs per pair", d.u, d.f, d.b) })
}

fn composition_uniformity(d: &Dims, r: &mut ExperimentRng) -> Result<CheckResult> {
    guard("composition uniformity cells", d.u * d.b)?;
    let t1 = sample_surjective(d.f, d.b, r)?;
    let cells = 1usize << (d.u * d.b);
    let mut counts = vec![0u64; cells];
    for _ in 0..d.samples {
        let t0 = sample_uniform_linear(d.u, d.f, r)?;
        counts[map_index(&composed(&t1, &t0, d.fault)?)] += 1;
    }
    let (chi2, p) = stats::chi_square(&counts, &vec![1.0 / cells as f64; cells]);
    Ok(CheckResult {
        instances: d.samples,
        failures: (p < 0.001) as u64,
        detail: format!("u={} f={} b={}; {cells} composite maps; chi2={chi2:.3} p={p:.4}", d.u, d.f, d.b),
    })
}

/// Compares exhaustive counts with the size of the full factor set,
/// `2^((f−b)·u)`, and reports how often the kernel-map count
/// `2^((f−b)·dim Ker T)` coincides with it.
fn factorization_count(d: &Dims) -> Result<CheckResult> {
    guard("factorization sweep", d.u * d.b + d.f * d.b + d.u * d.f)?;
    if d.f < d.b || d.u < d.f {
        return Err(Error::InvalidArgument("factorization-count needs u >= f >= b".into()));
    }
    let outers: Vec<LinearMap> = all_maps(d.f, d.b).filter(LinearMap::is_surjective).collect();
    let (mut pairs, mut failures, mut kernel_agree) = (0u64, 0u64, 0u64);
    let mut examples = Vec::new();
    for t in all_maps(d.u, d.b) {
        for t1 in &outers {
            let count = count_factorizations(&t, t1)? as u128;
            pairs += 1;
            failures += (count != factor_set_size(&t, t1)) as u64;
            kernel_agree += (count == kernel_map_count(&t, t1)) as u64;
            if examples.len() < 3 && !examples.iter().any(|(rk, _, _)| *rk == t.rank()) {
                examples.push((t.rank(), count, kernel_map_count(&t, t1)));
            }
        }
    }
    let examples: Vec<String> =
        examples.iter().map(|(rk, c, k)| format!("rank(T)={rk}: count={c}, 2^((f-b)dimKerT)={k}")).collect();
    Ok(CheckResult {
        instances: pairs,
        failures,
        detail: format!(
            "u={} f={} b={}; count == 2^((f-b)u) checked; count == 2^((f-b)dimKerT) on {kernel_agree}/{pairs} pairs; {}",
            d.u,
            d.f,
            d.b,
            examples.join("; ")
        ),
    })
}

fn random_instance(r: &mut ExperimentRng) -> Result<(crate::ballsbins::BallSet, LinearMap, LinearMap)> {
    let (umax, fmax, bmax) = RANDOM_MAX;
    let u = r.gen_range(1..=umax);
    let f = r.gen_range(1..=fmax);
    let b = r.gen_range(1..=bmax.min(f));
    let size = r.gen_range(1..=1usize << u);
    let s = generate_set(SetKind::Random, u, size, r)?;
    let t0 = sample_uniform_linear(u, f, r)?;
    let t1 = sample_surjective(f, b, r)?;
    Ok((s, t0, t1))
}

fn e2_equivalence(d: &Dims, r: &mut ExperimentRng) -> Result<CheckResult> {
    let (mut failures, mut hits) = (0, 0);
    for _ in 0..d.instances {
        let (s, t0, t1) = random_instance(r)?;
        let direct = event_e2_by_fibers(&s, &t0, &t1)?;
        failures += (direct != event_e2(&s, &t0, &t1)?) as u64;
        hits += direct as u64;
    }
    Ok(CheckResult {
        instances: d.instances as u64,
        failures,
        detail: format!("u<={} f<={} b<={}; E2 true on {hits}", RANDOM_MAX.0, RANDOM_MAX.1, RANDOM_MAX.2),
    })
}

fn implication(d: &Dims, r: &mut ExperimentRng) -> Result<CheckResult> {
    let (mut failures, mut witnesses) = (0, 0);
    for _ in 0..d.instances {
        let (s, t0, t1) = random_instance(r)?;
        let ell = r.gen_range(1..=s.len());
        let report = check_e1_e2_implication(&s, &t0, &t1, ell)?;
        failures += report.violations as u64;
        witnesses += report.witnesses.len();
    }
    Ok(CheckResult {
        instances: d.instances as u64,
        failures,
        detail: format!("{witnesses} heavy-bin witnesses examined"),
    })
}

fn pairwise(d: &Dims, r: &mut ExperimentRng) -> Result<CheckResult> {
    let report = pairwise_independence_check(d.u, d.b, 20_000, 16, r)?;
    Ok(CheckResult {
        instances: report.cells,
        failures: report.failures,
        detail: format!("{:?} mode; u={} b={}; {} maps, {} pairs", report.mode, d.u, d.b, report.maps, report.pairs),
    })
}

fn subspace(d: &Dims, r: &mut ExperimentRng) -> Result<CheckResult> {
    let (u, dim) = SUBSPACE_DIMS;
    let (mut failures, mut lbin_total) = (0, 0);
    for _ in 0..d.instances {
        let s = generate_set(SetKind::Subspace, u, dim, r)?;
        let t = sample_uniform_linear(u, dim, r)?;
        let report = subspace_structure(&t, &s)?;
        failures += !report.passed() as u64;
        lbin_total += report.lbin;
    }
    Ok(CheckResult {
        instances: d.instances as u64,
        failures,
        detail: format!("u={u} dim S=b={dim}; mean lbin {:.4}", lbin_total as f64 / d.instances.max(1) as f64),
    })
}

pub fn verify(args: VerifyArgs, seed: u64) -> Result<Outcome> {
    let dims = Dims {
        u: args.u.unwrap_or(3),
        f: args.f.unwrap_or(2),
        b: args.b.unwrap_or(1),
        samples: args.samples.unwrap_or(100_000),
        instances: args.instances.unwrap_or(10_000),
        fault: args.inject_fault.unwrap_or(false),
    };
    if dims.u == 0 || dims.f == 0 || dims.b == 0 {
        return Err(Error::InvalidArgument("dimensions must be >= 1".into()));
    }
    let selected: Vec<&str> = match args.check.as_deref() {
        None | Some("all") => CHECKS.to_vec(),
        Some(name) => match CHECKS.iter().find(|c| **c == name) {
            Some(c) => vec![*c],
            None => return Err(Error::InvalidArgument(format!("unknown check {name:?}; expected one of {CHECKS:?}"))),
        },
    };

    let mut table = Table::new(COLUMNS);
    let mut failed = Vec::new();
    for name in &selected {
        let index = CHECKS.iter().position(|c| c == name).expect("known check") as u64;
        let mut r = rng::substream(seed, index);
        let result = match *name {
            "composition-pointwise" => composition_pointwise(&dims, &mut r)?,
            "composition-uniformity" => composition_uniformity(&dims, &mut r)?,
            "factorization-count" => factorization_count(&dims)?,
            "e2-equivalence" => e2_equivalence(&dims, &mut r)?,
            "pairwise" => pairwise(&dims, &mut r)?,
            "subspace" => subspace(&dims, &mut r)?,
            "implication" => implication(&dims, &mut r)?,
            _ => unreachable!(),
        };
        let ok = result.failures == 0;
        if !ok {
            failed.push(*name);
        }
        table.push(&[
            ("check", json!(name)),
            ("status", json!(if ok { "pass" } else { "fail" })),
            ("instances", json!(result.instances)),
            ("failures", json!(result.failures)),
            ("detail", json!(result.detail)),
        ]);
    }
    Ok(Outcome {
        flags: json!({
            "checks": selected, "u": dims.u, "f": dims.f, "b": dims.b,
            "samples": dims.samples, "instances": dims.instances, "inject-fault": dims.fault,
        }),
        table,
        summary: json!({ "passed": failed.is_empty(), "failed": failed }),
        failed: !failed.is_empty(),
    })
}
