use serde_json::{json, Value};

use super::args::{BoundsArgs, ExactArgs, IntList, SimulateArgs, SizeSpec, TableBenchArgs};
use super::output::{Table, EXPERIMENT_COLUMNS};
use super::Outcome;
use crate::ballsbins::{
    exact_lbin_distribution, experiment_set, generate_set, largest_bin, run_trials, subspace_structure, BallSet,
    ExperimentConfig, SetKind, TrialSummary,
};
use crate::bounds::{
    bound_e2, bound_surjective_miss, bound_tail, c_epsilon, ell_threshold, tail_exponent, tail_exponent_onset,
    theorem2_f_and_ell, BoundValue,
};
use crate::error::{guard, Error, Result};
use crate::gf2::{sample_uniform_affine, sample_uniform_linear, sample_vector, Gf2Vector};
use crate::hashtable::LinearHashTable;
use crate::rng;
use crate::stats::{self, Z_95};

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn to_usizes(list: &IntList) -> Vec<usize> {
    list.0.iter().map(|&x| x as usize).collect()
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| usage(format!("--{flag} is required")))
}

fn ceil_log2(n: usize) -> usize {
    n.next_power_of_two().trailing_zeros() as usize
}

/// Resolves the set family and its generator parameter at bin dimension `b`.
fn set_param(
    kind: &Option<String>,
    size: Option<SizeSpec>,
    dim: Option<SizeSpec>,
    b: usize,
    default_size: Option<usize>,
) -> Result<(SetKind, usize)> {
    let kind: SetKind = kind.as_deref().unwrap_or("interval").parse()?;
    let param = if kind.takes_dim() {
        if size.is_some() {
            return Err(usage(format!("set kind {kind} takes --set-dim, not --set-size")));
        }
        required(dim, "set-dim")?.resolve(b).map_err(usage)?
    } else {
        if dim.is_some() {
            return Err(usage(format!("set kind {kind} takes --set-size, not --set-dim")));
        }
        match size {
            Some(s) => s.resolve(b).map_err(usage)?,
            None => required(default_size, "set-size")?,
        }
    };
    let log2_size = if kind.takes_dim() { param } else { ceil_log2(param.max(1)) };
    guard("ball set", log2_size)?;
    Ok((kind, param))
}

pub fn simulate(args: SimulateArgs, seed: u64, jobs: usize) -> Result<Outcome> {
    let u = required(args.u, "u")?;
    let bs = to_usizes(&required(args.b.clone(), "b")?);
    let trials = args.trials.unwrap_or(1000);
    let thresholds = args.thresholds.as_ref().map(to_usizes).unwrap_or_default();
    if trials == 0 {
        return Err(usage("--trials must be >= 1"));
    }

    let mut table = Table::new(EXPERIMENT_COLUMNS);
    let mut points = Vec::new();
    for &b in &bs {
        let (set_kind, param) = set_param(&args.set, args.set_size, args.set_dim, b, None)?;
        let config =
            ExperimentConfig { u, b, set_kind, set_param: param, trials, seed, thresholds: thresholds.clone(), jobs };
        let s = experiment_set(&config)?;
        let lbins = run_trials(&s, b, trials, seed, jobs)?;
        let summary = TrialSummary::from_lbins(&config, s.len(), lbins);

        let common = [
            ("u", json!(u)),
            ("b", json!(b)),
            ("set_kind", json!(set_kind.as_str())),
            ("set_size", json!(s.len())),
            ("seed", json!(seed)),
        ];
        for (i, &lbin) in summary.lbins.iter().enumerate() {
            let mut cells = vec![("experiment", json!("simulate")), ("trial", json!(i)), ("lbin", json!(lbin))];
            cells.extend(common.iter().cloned());
            table.push(&cells);
        }
        let half = Z_95 * summary.std_error;
        let mut cells = vec![
            ("experiment", json!("summary:mean")),
            ("freq", json!(summary.mean)),
            ("ci_lo", json!(summary.mean - half)),
            ("ci_hi", json!(summary.mean + half)),
        ];
        cells.extend(common.iter().cloned());
        table.push(&cells);
        for (name, value) in [
            ("summary:min", summary.min),
            ("summary:median", summary.median),
            ("summary:q90", summary.q90),
            ("summary:q99", summary.q99),
            ("summary:max", summary.max),
        ] {
            let mut cells = vec![("experiment", json!(name)), ("lbin", json!(value))];
            cells.extend(common.iter().cloned());
            table.push(&cells);
        }
        for tail in &summary.tails {
            let mut cells = vec![
                ("experiment", json!("summary:tail")),
                ("threshold", json!(tail.threshold)),
                ("freq", json!(tail.freq)),
                ("ci_lo", json!(tail.ci.lo)),
                ("ci_hi", json!(tail.ci.hi)),
            ];
            cells.extend(common.iter().cloned());
            table.push(&cells);
        }
        points.push(summary);
    }

    let xs: Vec<f64> = points.iter().map(|p| p.b as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.mean).collect();
    let slope = (points.len() >= 2).then(|| stats::slope(&xs, &ys));
    Ok(Outcome {
        flags: json!({
            "u": u, "b": bs, "set": args.set.as_deref().unwrap_or("interval"),
            "set-size": args.set_size, "set-dim": args.set_dim,
            "trials": trials, "thresholds": thresholds,
        }),
        table,
        summary: json!({ "points": points, "mean_vs_b_slope": slope }),
        failed: false,
    })
}

pub fn exact(args: ExactArgs, seed: u64) -> Result<Outcome> {
    let u = required(args.u, "u")?;
    let b = required(args.b, "b")?;
    if u == 0 || b == 0 {
        return Err(usage("--u and --b must be >= 1"));
    }
    guard("exact lbin enumeration", u * b)?;
    let (set_kind, param) = set_param(&args.set, args.set_size, args.set_dim, b, Some(1 << u))?;
    let s = generate_set(set_kind, u, param, &mut rng::substream(seed, rng::SETUP_STREAM))?;
    let dist = exact_lbin_distribution(u, b, &s)?;
    let thresholds = match &args.thresholds {
        Some(list) => to_usizes(list),
        None => (1..=s.len()).collect(),
    };

    let mut table = Table::new(EXPERIMENT_COLUMNS);
    let common = [
        ("u", json!(u)),
        ("b", json!(b)),
        ("set_kind", json!(set_kind.as_str())),
        ("set_size", json!(s.len())),
        ("seed", json!(seed)),
    ];
    let expected = dist.expected();
    let mut push = |mut cells: Vec<(&str, Value)>| {
        cells.extend(common.iter().cloned());
        table.push(&cells);
    };
    push(vec![("experiment", json!("exact:expected")), ("freq", json!(expected.to_string()))]);
    for (&lbin, &count) in &dist.histogram {
        let p = num_rational::Ratio::new(count, dist.maps);
        push(vec![("experiment", json!("exact:pmf")), ("lbin", json!(lbin)), ("freq", json!(p.to_string()))]);
    }
    for &ell in &thresholds {
        push(vec![
            ("experiment", json!("exact:tail")),
            ("threshold", json!(ell)),
            ("freq", json!(dist.tail(ell).to_string())),
        ]);
    }
    Ok(Outcome {
        flags: json!({
            "u": u, "b": b, "set": set_kind.as_str(), "set-param": param, "thresholds": thresholds,
        }),
        table,
        summary: json!({
            "maps": dist.maps,
            "expected": expected.to_string(),
            "expected_value": *expected.numer() as f64 / *expected.denom() as f64,
        }),
        failed: false,
    })
}

const BOUND_COLUMNS: &[&str] =
    &["formula", "u", "t", "b", "f", "r", "alpha", "eps", "raw", "clamped", "vacuous", "exponent", "ell", "threshold"];

const FORMULAS: &[&str] = &["c-epsilon", "surjective-miss", "e2", "tail", "ell-threshold", "theorem2"];

fn bound_cells(v: BoundValue) -> [(&'static str, Value); 3] {
    [("raw", json!(v.raw)), ("clamped", json!(v.clamped)), ("vacuous", json!(v.vacuous))]
}

pub fn bounds(args: BoundsArgs) -> Result<Outcome> {
    let formula = args.formula.as_deref().unwrap_or("all");
    let selected: Vec<&str> = if formula == "all" {
        FORMULAS.to_vec()
    } else {
        let chosen: Vec<&str> = formula.split(',').map(str::trim).collect();
        if let Some(bad) = chosen.iter().find(|f| !FORMULAS.contains(f)) {
            return Err(usage(format!("unknown formula {bad:?} (expected one of {FORMULAS:?} or all)")));
        }
        chosen
    };
    let ints = |list: &Option<IntList>, default: &[u64]| -> Vec<u32> {
        list.as_ref().map_or(default.to_vec(), |l| l.0.clone()).into_iter().map(|x| x as u32).collect()
    };
    let reals = |list: &Option<super::args::FloatList>, default: &[f64]| -> Vec<f64> {
        list.as_ref().map_or(default.to_vec(), |l| l.0.clone())
    };
    let us = ints(&args.u, &[10]);
    let ts = ints(&args.t, &[4]);
    let bs = ints(&args.b, &[8]);
    let fs = ints(&args.f, &[11]);
    let rs = reals(&args.r, &[16.0, 256.0]);
    let alphas = reals(&args.alpha, &[0.5]);
    let epss = reals(&args.eps, &[0.5]);

    let mut table = Table::new(BOUND_COLUMNS);
    let mut vacuous = 0usize;
    let mut push = |cells: &[(&str, Value)]| {
        if cells.iter().any(|(k, v)| *k == "vacuous" && *v == json!(true)) {
            vacuous += 1;
        }
        table.push(cells);
    };
    for &name in &selected {
        let tag = ("formula", json!(name));
        match name {
            "c-epsilon" => {
                for &eps in &epss {
                    push(&[tag.clone(), ("eps", json!(eps)), ("raw", json!(c_epsilon(eps)?))]);
                }
            }
            "surjective-miss" => {
                for (&u, &t, &alpha) in iproduct3(&us, &ts, &alphas) {
                    if t >= u {
                        continue;
                    }
                    let mut cells = vec![tag.clone(), ("u", json!(u)), ("t", json!(t)), ("alpha", json!(alpha))];
                    cells.extend(bound_cells(bound_surjective_miss(u, t, alpha)?));
                    push(&cells);
                }
            }
            "e2" => {
                for (&b, &f) in bs.iter().flat_map(|b| fs.iter().map(move |f| (b, f))) {
                    if f <= b {
                        continue;
                    }
                    let mut cells = vec![tag.clone(), ("b", json!(b)), ("f", json!(f))];
                    cells.extend(bound_cells(bound_e2(b, f)?));
                    push(&cells);
                }
            }
            "tail" => {
                for (&b, &r, &eps) in iproduct3(&bs, &rs, &epss) {
                    let mut cells = vec![tag.clone(), ("b", json!(b)), ("r", json!(r)), ("eps", json!(eps))];
                    cells.extend(bound_cells(bound_tail(b, r, eps)?));
                    cells.push(("exponent", json!(tail_exponent(b, r))));
                    push(&cells);
                }
            }
            "ell-threshold" => {
                for (&b, &f, &eps) in iproduct3(&bs, &fs, &epss) {
                    if f < b {
                        continue;
                    }
                    push(&[
                        tag.clone(),
                        ("b", json!(b)),
                        ("f", json!(f)),
                        ("eps", json!(eps)),
                        ("threshold", json!(ell_threshold(eps, f, b)?)),
                    ]);
                }
            }
            "theorem2" => {
                for (&b, &r, &eps) in iproduct3(&bs, &rs, &epss) {
                    let p = theorem2_f_and_ell(b, r, eps)?;
                    push(&[
                        tag.clone(),
                        ("b", json!(b)),
                        ("r", json!(r)),
                        ("eps", json!(eps)),
                        ("f", json!(p.f)),
                        ("ell", json!(p.ell)),
                        ("threshold", json!(p.threshold)),
                    ]);
                }
            }
            _ => unreachable!("validated above"),
        }
    }
    if table.is_empty() {
        return Err(usage("no parameter combination satisfies the formula preconditions"));
    }
    let mut onset = serde_json::Map::new();
    if selected.contains(&"tail") {
        for &b in &bs {
            onset.insert(b.to_string(), json!(tail_exponent_onset(b, 1024)));
        }
    }
    Ok(Outcome {
        flags: json!({
            "formula": selected, "u": us, "t": ts, "b": bs, "f": fs, "r": rs, "alpha": alphas, "eps": epss,
        }),
        summary: json!({ "rows": table.len(), "vacuous": vacuous, "exponent_onset_log2_r": onset }),
        table,
        failed: false,
    })
}

fn iproduct3<'a, A, B, C>(a: &'a [A], b: &'a [B], c: &'a [C]) -> impl Iterator<Item = (&'a A, &'a B, &'a C)> {
    a.iter().flat_map(move |x| b.iter().flat_map(move |y| c.iter().map(move |z| (x, y, z))))
}

const BENCH_COLUMNS: &[&str] = &[
    "workload",
    "n",
    "u",
    "b",
    "max_chain",
    "largest_bin",
    "subspace_prediction",
    "mean_probes_hit",
    "mean_probes_miss",
    "resizes",
    "seed",
];

pub fn table_bench(args: TableBenchArgs, seed: u64) -> Result<Outcome> {
    let u = args.u.unwrap_or(32);
    if u == 0 || u > 64 {
        return Err(usage("--u must lie in 1..=64"));
    }
    let ns = to_usizes(args.n.as_ref().unwrap_or(&IntList(vec![1 << 10, 1 << 12, 1 << 14, 1 << 16])));
    let workloads: Vec<SetKind> = match args.keys.as_deref() {
        None => vec![SetKind::Random, SetKind::Interval, SetKind::Subspace],
        Some(list) => list
            .split(',')
            .map(|w| match w.trim().parse()? {
                k @ (SetKind::Random | SetKind::Interval | SetKind::Subspace) => Ok(k),
                other => Err(usage(format!("unsupported workload {other}"))),
            })
            .collect::<Result<_>>()?,
    };
    let linear = args.linear.unwrap_or(false);

    let mut table = Table::new(BENCH_COLUMNS);
    let mut stats_out = Vec::new();
    for (wi, &kind) in workloads.iter().enumerate() {
        for (ni, &n) in ns.iter().enumerate() {
            guard("table-bench keys", ceil_log2(n.max(1)))?;
            // Even streams draw keys and lookups, odd streams drive the table.
            let stream = (((wi as u64) << 32) | ni as u64) << 1;
            let mut r = rng::substream(seed, stream);
            let keys = match (kind, n) {
                (_, 0) => None,
                (SetKind::Subspace, n) if !n.is_power_of_two() => {
                    return Err(usage(format!("subspace workload needs n a power of two, got {n}")))
                }
                (SetKind::Subspace, n) => Some(generate_set(kind, u, n.trailing_zeros() as usize, &mut r)?),
                (kind, n) => Some(generate_set(kind, u, n, &mut r)?),
            };
            let b = args.b.unwrap_or(ceil_log2(n).max(1));
            let mut table_rng = rng::substream(seed, stream | 1);
            let hash = if linear {
                sample_uniform_linear(u, b, &mut table_rng)?
            } else {
                sample_uniform_affine(u, b, &mut table_rng)?
            };
            let mut t = LinearHashTable::with_map(hash, table_rng)?;
            let members: &[Gf2Vector] = keys.as_ref().map_or(&[], BallSet::members);
            for (i, k) in members.iter().enumerate() {
                t.insert(k.clone(), i)?;
            }
            for k in members {
                t.get(k)?;
            }
            for _ in 0..n {
                t.get(&sample_vector(u, &mut r))?;
            }
            let s = t.stats();
            let (lb, prediction) = match &keys {
                None => (0, None),
                Some(set) => {
                    let lb = largest_bin(t.hash(), set)?;
                    let pred =
                        (kind == SetKind::Subspace).then(|| subspace_structure(t.hash(), set).map(|r| 1usize << r.k));
                    (lb, pred.transpose()?)
                }
            };
            table.push(&[
                ("workload", json!(kind.as_str())),
                ("n", json!(n)),
                ("u", json!(u)),
                ("b", json!(s.bucket_bits)),
                ("max_chain", json!(s.max_chain)),
                ("largest_bin", json!(lb)),
                ("subspace_prediction", json!(prediction)),
                ("mean_probes_hit", json!(s.mean_probes_hit)),
                ("mean_probes_miss", json!(s.mean_probes_miss)),
                ("resizes", json!(s.resizes)),
                ("seed", json!(seed)),
            ]);
            stats_out.push(json!({ "workload": kind.as_str(), "n": n, "stats": s }));
        }
    }
    Ok(Outcome {
        flags: json!({
            "u": u, "b": args.b, "n": ns,
            "keys": workloads.iter().map(|k| k.as_str()).collect::<Vec<_>>(), "linear": linear,
        }),
        table,
        summary: json!({ "runs": stats_out }),
        failed: false,
    })
}
