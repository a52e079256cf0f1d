//! One function per subcommand. Each returns parameters, results,
//! tolerances and an optional table.

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use symdyn::entrolab::blocks::{lemma_table, ENTROPY_TOL};
use symdyn::entrolab::markov::MARKOV_TOL;
use symdyn::entrolab::spectral::SPECTRAL_TOL;
use symdyn::entrolab::{cover_entropy, parse_measure, sft_entropy, MarkovMeasure};
use symdyn::exact::{parse_rational, Rational};
use symdyn::recfam::real::FRAC_BITS;
use symdyn::recfam::{
    bohr_membership, classify_sft, classify_window, difference_set, ip_set, matrix_coefficient, n_set,
    poincare_return_masses, rotation_recurrence, sip_set, upe_witness, weyl_average, BohrSpec, IntegerWindowSet,
    QuadraticReal, SequenceSpec,
};
use symdyn::symcore::{parse_cover, parse_partition, parse_union};
use symdyn::towers::{
    kr_two_heights, natural_measure, nest_tower, return_times, uniformity_defect, CylinderMeasure, UniformityMode,
};
use symdyn::varprin::{attain_cover_entropy, evaluate_h_check, universal_rohlin, GoodPointOptions};
use symdyn::Error;

use crate::report::{Outcome, Table};
use crate::{CliError, Context};

type Res = Result<Outcome, CliError>;

fn val<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn bad(msg: impl Into<String>) -> CliError {
    Error::InvalidArgument(msg.into()).into()
}

fn rational(name: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).ok_or_else(|| bad(format!("--{name}: not a rational: {s:?}")))
}

fn int_list(name: &str, s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| bad(format!("--{name}: not an integer: {t:?}"))))
        .collect()
}

fn usize_list(name: &str, s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| bad(format!("--{name}: not a count: {t:?}"))))
        .collect()
}

fn fmt_f(x: f64) -> String {
    format!("{x}")
}

fn precision(ctx: &Context) -> Result<u32, CliError> {
    match ctx.global.precision {
        None => Ok(FRAC_BITS),
        Some(p) if p == FRAC_BITS => Ok(p),
        Some(p) => Err(bad(format!("--precision {p}: fractional parts are kept to {FRAC_BITS} bits"))),
    }
}

fn window_table(s: &IntegerWindowSet) -> Table {
    let mut t = Table::new(&["n"]);
    for m in s.members() {
        t.push(vec![m.to_string()]);
    }
    t
}

#[derive(Args, Debug)]
pub struct EntropyArgs {
    /// `generating`, `trivial`, or unions separated by `|`.
    #[arg(long, default_value = "generating")]
    pub cover: String,
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
}

pub fn entropy(ctx: &Context, a: &EntropyArgs) -> Res {
    let x = ctx.system()?;
    let u = parse_cover(&x, &a.cover)?;
    let ce = cover_entropy(&x, &u, a.n_max)?;
    let tol = 0.05;
    let sft = if x.is_sft() { Some(sft_entropy(&x)?) } else { None };
    let diff = sft.map(|h| (ce.estimate - h).abs());
    let mut t = Table::new(&["n", "r", "value"]);
    for r in &ce.per_n {
        t.push(vec![r.n.to_string(), r.r.to_string(), fmt_f(r.value)]);
    }
    Ok(Outcome {
        parameters: json!({"cover": a.cover, "n_max": a.n_max}),
        results: json!({
            "cover": u.to_string(),
            "cover_entropy": val(&ce),
            "sft_entropy": sft,
            "difference": diff,
            "within_tolerance": diff.map(|d| d <= tol),
        }),
        tolerances: json!({"subcover_counts": "exact", "cross_check": tol, "sft_entropy": SPECTRAL_TOL}),
        table: Some(t),
    })
}

#[derive(Args, Debug)]
pub struct LemmaArgs {
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
    #[arg(long)]
    pub n_lo: Option<usize>,
    #[arg(long, default_value_t = 16)]
    pub n_hi: usize,
    #[arg(short, long, default_value_t = 1)]
    pub k: usize,
    #[arg(long)]
    pub h: f64,
    #[arg(long, default_value_t = 0.2)]
    pub eps: f64,
}

pub fn lemma(ctx: &Context, a: &LemmaArgs) -> Res {
    let n_lo = a.n_lo.unwrap_or(a.k);
    let r = lemma_table(a.alphabet, n_lo, a.n_hi, a.k, a.h, a.eps, &ctx.caps)?;
    let mut t = Table::new(&["n", "count", "bound", "holds"]);
    for row in &r.rows {
        t.push(vec![row.n.to_string(), row.count.to_string(), fmt_f(row.bound), row.holds.to_string()]);
    }
    Ok(Outcome {
        parameters: json!({"alphabet": a.alphabet, "n_lo": n_lo, "n_hi": a.n_hi, "k": a.k, "h": a.h, "eps": a.eps}),
        results: val(&r),
        tolerances: json!({"counts": "exact", "entropy_comparison": ENTROPY_TOL}),
        table: Some(t),
    })
}

#[derive(Args, Debug)]
pub struct VarArgs {
    #[arg(long, default_value = "generating")]
    pub cover: String,
    /// Family measure; repeat for several (`parry`, `perturb:0.1`, `graph:1/2,1/2;1`, ...).
    #[arg(long = "measure")]
    pub measures: Vec<String>,
    /// `K:N` stages separated by commas.
    #[arg(long, default_value = "1:64,2:1024")]
    pub schedule: String,
    /// Block length for conditional entropies.
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long, default_value_t = 0.05)]
    pub tol: f64,
    #[arg(long, default_value_t = 512)]
    pub walks: u64,
}

pub fn varprinciple(ctx: &Context, a: &VarArgs) -> Res {
    let x = ctx.system()?;
    let u = parse_cover(&x, &a.cover)?;
    let specs: Vec<String> = if a.measures.is_empty() { vec!["parry".into()] } else { a.measures.clone() };
    let family = specs.iter().map(|s| parse_measure(&x, s)).collect::<symdyn::Result<Vec<_>>>()?;
    let schedule = a
        .schedule
        .split(',')
        .map(|st| {
            let (k, n) = st.split_once(':').ok_or_else(|| bad(format!("--schedule: expected K:N, got {st:?}")))?;
            let p = |v: &str| v.trim().parse::<usize>().map_err(|_| bad(format!("--schedule: bad number {v:?}")));
            Ok((p(k)?, p(n)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let r = ctx.global.resolution.unwrap_or(2);
    let opts = GoodPointOptions { walks: a.walks, seed: ctx.seed(), ..GoodPointOptions::default() };
    let check = evaluate_h_check(&x, &u, &family, r, a.n_max, a.tol)?;
    let attain = attain_cover_entropy(&x, &u, &schedule, &opts, a.tol)?;
    let mut t = Table::new(&["measure", "partition", "entropy"]);
    for (i, m) in check.family.iter().enumerate() {
        for (j, p) in check.partitions.iter().enumerate() {
            t.push(vec![m.clone(), p.clone(), fmt_f(check.values[i][j])]);
        }
    }
    Ok(Outcome {
        parameters: json!({
            "cover": a.cover,
            "family": specs,
            "schedule": schedule,
            "resolution": r,
            "n_max": a.n_max,
            "walks": opts.walks,
            "seed": opts.seed,
            "cover_n": opts.cover_n,
        }),
        results: json!({"h_check": val(&check), "attain": val(&attain)}),
        tolerances: json!({"chain": a.tol, "attain": a.tol, "markov_rows": MARKOV_TOL, "empirical_defect": "2K/N"}),
        table: Some(t),
    })
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TowerKind {
    /// Two-height Kakutani-Rohlin tower with heights N and N+1.
    Kr,
    /// Tower nested in a K-R tower with heights in [n, n+4N].
    Nest,
    /// Universal Rohlin tower for a family of measures.
    Rohlin,
    /// First-return law of a cylinder union.
    Returns,
    /// Uniformity defect of ergodic averages.
    Uniformity,
}

#[derive(Args, Debug)]
pub struct TowerArgs {
    #[arg(long, value_enum)]
    pub kind: TowerKind,
    /// Height parameter N (kr, nest) or tower height n (rohlin).
    #[arg(short, long, default_value_t = 3)]
    pub n: usize,
    /// Height lower bound of the nested tower (default 2(N+1)).
    #[arg(long)]
    pub outer: Option<usize>,
    #[arg(long, default_value = "1/3")]
    pub delta: String,
    /// Measure; repeat for rohlin.
    #[arg(long = "measure")]
    pub measures: Vec<String>,
    /// Base cylinder union for `returns`.
    #[arg(long)]
    pub base: Option<String>,
    #[arg(long, default_value_t = 32)]
    pub l_max: usize,
    /// Averaging lengths for `uniformity`.
    #[arg(long, default_value = "16,64,256,1024")]
    pub n_list: String,
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    /// Sample this many walks instead of every window.
    #[arg(long)]
    pub sampled: Option<u64>,
    #[arg(long, default_value = "generating")]
    pub partition: String,
}

fn one_measure(x: &symdyn::Subshift, specs: &[String]) -> Result<(String, MarkovMeasure), CliError> {
    let s = match specs {
        [] => "parry".to_string(),
        [s] => s.clone(),
        _ => return Err(bad("this tower takes a single --measure")),
    };
    Ok((s.clone(), parse_measure(x, &s)?))
}

pub fn tower(ctx: &Context, a: &TowerArgs) -> Res {
    let x = ctx.system()?;
    let exact_tol = json!({"masses": "exact when the measure is rational", "float_kac": "max(1e-9, 1e-13/mu(B))"});
    match a.kind {
        TowerKind::Kr | TowerKind::Nest => {
            let (spec, mu) = one_measure(&x, &a.measures)?;
            let res = ctx.global.resolution.unwrap_or(2 * (10 * a.n * a.n + 1));
            let t = kr_two_heights(&x, &mu, a.n, Some(res))?;
            let mut params = json!({"kind": "kr", "n": a.n, "measure": spec, "resolution": res});
            let out = if matches!(a.kind, TowerKind::Nest) {
                let outer = a.outer.unwrap_or(2 * (a.n + 1));
                params["kind"] = json!("nest");
                params["outer"] = json!(outer);
                let d = nest_tower(&x, &t, outer)?;
                json!({"inner": val(&t), "nested": val(&d), "height_window": [outer, outer + 4 * a.n]})
            } else {
                json!({"tower": val(&t), "heights": t.heights()})
            };
            let mut table = Table::new(&["height", "mass", "exact_mass"]);
            for c in &t.columns {
                table.push(vec![
                    c.height.to_string(),
                    c.mass.map(fmt_f).unwrap_or_default(),
                    c.exact_mass.clone().unwrap_or_default(),
                ]);
            }
            Ok(Outcome { parameters: params, results: out, tolerances: exact_tol, table: Some(table) })
        }
        TowerKind::Rohlin => {
            let specs: Vec<String> = if a.measures.is_empty() { vec!["uniform".into()] } else { a.measures.clone() };
            let fam = specs.iter().map(|s| parse_measure(&x, s)).collect::<symdyn::Result<Vec<_>>>()?;
            let delta = rational("delta", &a.delta)?;
            let r = universal_rohlin(&x, a.n, &delta, &fam, ctx.global.resolution)?;
            let res = ctx.global.resolution.unwrap_or(2 * r.iterates + 16);
            let mut table = Table::new(&["measure", "coverage", "exact", "holds"]);
            for c in &r.coverages {
                table.push(vec![c.measure.clone(), fmt_f(c.coverage), c.exact.clone().unwrap_or_default(), c.holds.to_string()]);
            }
            Ok(Outcome {
                parameters: json!({"kind": "rohlin", "n": a.n, "delta": delta.to_string(), "measures": specs, "resolution": res}),
                results: val(&r),
                tolerances: json!({"disjointness": "exact", "coverage": "exact when the measure is rational"}),
                table: Some(table),
            })
        }
        TowerKind::Returns => {
            let (spec, mu) = one_measure(&x, &a.measures)?;
            let base = a.base.as_deref().ok_or_else(|| bad("returns needs --base"))?;
            let b = parse_union(x.ell(), base, x.caps())?;
            let r = return_times(&x, &b, &mu, a.l_max)?;
            let mut table = Table::new(&["l", "mass"]);
            for (l, m) in &r.masses {
                table.push(vec![l.to_string(), fmt_f(*m)]);
            }
            Ok(Outcome {
                parameters: json!({"kind": "returns", "measure": spec, "base": base, "l_max": a.l_max}),
                results: val(&r),
                tolerances: exact_tol,
                table: Some(table),
            })
        }
        TowerKind::Uniformity => {
            let p = parse_partition(&x, &a.partition)?;
            let ns = usize_list("n-list", &a.n_list)?;
            let (label, mu): (String, Box<dyn CylinderMeasure>) = match a.measures.as_slice() {
                [] => {
                    let m = natural_measure(&x)?;
                    (m.label(), m)
                }
                [s] => (s.clone(), Box::new(parse_measure(&x, s)?)),
                _ => return Err(bad("uniformity takes a single --measure")),
            };
            let mode = match a.sampled {
                Some(walks) => UniformityMode::Sampled { walks, seed: ctx.seed() },
                None => UniformityMode::Exhaustive,
            };
            let r = uniformity_defect(&x, &p, mu.as_ref(), &ns, a.depth, mode)?;
            let mut table = Table::new(&["n", "deviation", "witness"]);
            for row in &r.rows {
                table.push(vec![row.n.to_string(), fmt_f(row.deviation), row.witness.clone()]);
            }
            Ok(Outcome {
                parameters: json!({
                    "kind": "uniformity",
                    "partition": a.partition,
                    "measure": label,
                    "n_list": ns,
                    "depth": a.depth,
                    "mode": match mode {
                        UniformityMode::Exhaustive => json!("exhaustive"),
                        UniformityMode::Sampled { walks, seed } => json!({"sampled": walks, "seed": seed}),
                    },
                }),
                results: val(&r),
                tolerances: json!({"deviation": "float; sampled values are lower bounds"}),
                table: Some(table),
            })
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RecurKind {
    /// N(U, V) on [-H, H].
    Nset,
    Bohr,
    Ip,
    Sip,
    Difference,
    /// μ(B ∩ T^{-s_j} B) along a sequence.
    Poincare,
    /// Centered correlations φ_f(n).
    Matrix,
    /// Entropy of two-set covers by cylinder complements.
    Upe,
}

#[derive(Args, Debug)]
pub struct RecurArgs {
    #[arg(long, value_enum)]
    pub kind: RecurKind,
    #[arg(long)]
    pub u: Option<String>,
    #[arg(long)]
    pub v: Option<String>,
    #[arg(long, default_value_t = 64)]
    pub horizon: i64,
    /// Frequency for Bohr sets; repeat for several.
    #[arg(long = "alpha")]
    pub alphas: Vec<String>,
    #[arg(long, default_value = "1/20")]
    pub eps: String,
    /// Generators (ip, sip) or members (difference), comma separated.
    #[arg(long)]
    pub set: Option<String>,
    #[arg(long)]
    pub measure: Option<String>,
    /// Base set B (poincare) or f (matrix).
    #[arg(long)]
    pub base: Option<String>,
    #[arg(long, default_value = "squares")]
    pub seq: String,
    #[arg(long, default_value_t = 20)]
    pub j_max: usize,
    #[arg(long, default_value_t = 30)]
    pub n_max: usize,
}

fn window_outcome(ctx: &Context, params: Value, s: &IntegerWindowSet) -> Outcome {
    let class = classify_window(s, ctx.caps.search_nodes);
    Outcome {
        parameters: params,
        results: json!({"set": val(s), "classification": val(&class)}),
        tolerances: json!({"membership": "exact"}),
        table: Some(window_table(s)),
    }
}

pub fn recur(ctx: &Context, a: &RecurArgs) -> Res {
    let need = |o: &Option<String>, flag: &str| o.clone().ok_or_else(|| bad(format!("this kind needs --{flag}")));
    match a.kind {
        RecurKind::Nset => {
            let x = ctx.system()?;
            let (us, vs) = (need(&a.u, "u")?, need(&a.v, "v")?);
            let u = parse_union(x.ell(), &us, x.caps())?;
            let v = parse_union(x.ell(), &vs, x.caps())?;
            let s = n_set(&x, &u, &v, a.horizon)?;
            Ok(window_outcome(ctx, json!({"kind": "nset", "u": us, "v": vs, "horizon": a.horizon}), &s))
        }
        RecurKind::Bohr => {
            if a.alphas.is_empty() {
                return Err(bad("bohr needs at least one --alpha"));
            }
            let freqs = a.alphas.iter().map(|s| QuadraticReal::parse(s)).collect::<symdyn::Result<Vec<_>>>()?;
            let eps = rational("eps", &a.eps)?;
            let spec = BohrSpec::new(freqs, eps.clone())?;
            let r = bohr_membership(&spec, a.horizon, &ctx.caps)?;
            let mut out = window_outcome(
                ctx,
                json!({"kind": "bohr", "alpha": a.alphas, "eps": eps.to_string(), "horizon": a.horizon, "precision": precision(ctx)?}),
                &r.set,
            );
            out.results["report"] = val(&r);
            Ok(out)
        }
        RecurKind::Ip | RecurKind::Sip | RecurKind::Difference => {
            let set = need(&a.set, "set")?;
            let v = int_list("set", &set)?;
            let (name, s) = match a.kind {
                RecurKind::Ip => ("ip", ip_set(&v, &ctx.caps)?),
                RecurKind::Sip => ("sip", sip_set(&v, &ctx.caps)?),
                _ => ("difference", difference_set(&v)?),
            };
            Ok(window_outcome(ctx, json!({"kind": name, "set": v}), &s))
        }
        RecurKind::Poincare => {
            let x = ctx.system()?;
            let spec = a.measure.clone().unwrap_or_else(|| "parry".into());
            let mu = parse_measure(&x, &spec)?;
            let bs = need(&a.base, "base")?;
            let b = parse_union(x.ell(), &bs, x.caps())?;
            let seq = SequenceSpec::parse(&a.seq)?;
            let r = poincare_return_masses(&mu, &b, &seq, a.j_max, ctx.caps.states)?;
            let mut t = Table::new(&["j", "s_j", "mass", "exact"]);
            for row in &r.rows {
                t.push(vec![row.j.to_string(), row.s_j.to_string(), fmt_f(row.mass), row.exact.clone().unwrap_or_default()]);
            }
            Ok(Outcome {
                parameters: json!({"kind": "poincare", "measure": spec, "base": bs, "seq": a.seq, "j_max": a.j_max}),
                results: val(&r),
                tolerances: json!({"masses": "exact when the measure is rational"}),
                table: Some(t),
            })
        }
        RecurKind::Matrix => {
            let x = ctx.system()?;
            let spec = a.measure.clone().unwrap_or_else(|| "parry".into());
            let mu = parse_measure(&x, &spec)?;
            let fs = need(&a.base, "base")?;
            let f = parse_union(x.ell(), &fs, x.caps())?;
            let r = matrix_coefficient(&mu, &f, a.n_max)?;
            let mut t = Table::new(&["n", "phi"]);
            for (n, v) in r.values.iter().enumerate() {
                t.push(vec![n.to_string(), fmt_f(*v)]);
            }
            Ok(Outcome {
                parameters: json!({"kind": "matrix", "measure": spec, "f": fs, "n_max": a.n_max}),
                results: val(&r),
                tolerances: json!({"rigidity": r.rigidity_tol}),
                table: Some(t),
            })
        }
        RecurKind::Upe => {
            let x = ctx.system()?;
            let l = ctx.global.resolution.unwrap_or(1);
            let r = upe_witness(&x, l, a.n_max)?;
            let mut t = Table::new(&["a", "b", "entropy", "average"]);
            for c in &r.covers {
                t.push(vec![c.a.clone(), c.b.clone(), fmt_f(c.entropy), fmt_f(c.average)]);
            }
            Ok(Outcome {
                parameters: json!({"kind": "upe", "resolution": l, "n_max": a.n_max}),
                results: val(&r),
                tolerances: json!({"positive": r.tol}),
                table: Some(t),
            })
        }
    }
}

#[derive(Args, Debug)]
pub struct WeylArgs {
    /// `squares`, `odd_squares`, `arith:S:T`, `lacunary:B` or explicit terms.
    #[arg(long, default_value = "squares")]
    pub seq: String,
    /// α in turns, e.g. `sqrt2m1`, `goldenm1`, `3*sqrt(5)/2`.
    #[arg(long)]
    pub alpha: String,
    #[arg(short, long, default_value_t = 100_000)]
    pub n: usize,
    /// Also search for j with ‖s_j α‖ < EPS.
    #[arg(long)]
    pub recurrence_eps: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub max_terms: usize,
}

pub fn weyl(ctx: &Context, a: &WeylArgs) -> Res {
    let bits = precision(ctx)?;
    let seq = SequenceSpec::parse(&a.seq)?;
    let alpha = QuadraticReal::parse(&a.alpha)?;
    let w = weyl_average(&seq, &alpha, a.n, &ctx.caps)?;
    let rec = match &a.recurrence_eps {
        Some(e) => {
            let eps = rational("recurrence-eps", e)?;
            Some(val(&rotation_recurrence(&alpha, &eps, &seq, a.max_terms)?))
        }
        None => None,
    };
    Ok(Outcome {
        parameters: json!({
            "seq": a.seq,
            "alpha": alpha.to_string(),
            "n": a.n,
            "precision": bits,
            "recurrence_eps": a.recurrence_eps,
            "max_terms": a.max_terms,
        }),
        results: json!({"average": val(&w), "recurrence": rec}),
        tolerances: json!({"average": w.error_bound, "recurrence": "exact"}),
        table: None,
    })
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long, default_value_t = 64)]
    pub horizon: i64,
}

pub fn classify(ctx: &Context, a: &ClassifyArgs) -> Res {
    let x = ctx.system()?;
    let c = classify_sft(&x, a.horizon)?;
    let mut t = Table::new(&["u", "v", "positive_hit", "tail_start", "thick_run", "product_run"]);
    for p in &c.pairs {
        t.push(vec![
            p.u.to_string(),
            p.v.to_string(),
            p.positive_hit.to_string(),
            p.tail_start.map(|s| s.to_string()).unwrap_or_default(),
            p.thick_run.to_string(),
            p.product_run.to_string(),
        ]);
    }
    Ok(Outcome {
        parameters: json!({"horizon": a.horizon}),
        results: val(&c),
        tolerances: json!({"flags": "exact", "window": "mixing: tail_start <= H/2; weak mixing: product run >= H/2"}),
        table: Some(t),
    })
}
