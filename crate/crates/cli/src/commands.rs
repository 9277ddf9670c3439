//! Subcommand definitions, dispatch, and output documents.
//!
//! Every run prints one JSON document (keys sorted, so output is
//! byte-for-byte reproducible). Exit statuses: 0 computed (negative answers
//! included), 2 input error, 3 resource cap, 4 field extension required.

use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use ritt_core::conjugacy::{self, Witness};
use ritt_core::decompose;
use ritt_core::dml::{self, PreperiodicOutcome, Progression};
use ritt_core::msclass::{self, ConstantExpr, PeriodCertificate};
use ritt_core::semiconj::{self, SemiconjWitness};
use ritt_core::symmetry::{self, GroupKind, LinearGroup};
use ritt_core::{BivarCurve, Error, ExtensionHint, Field, Poly, Scalar};

use crate::parse::{self, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_EXTENSION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "ritt-kit", version, about = "Exact polynomial decomposition, semiconjugacy and split-map dynamics")]
pub struct Cli {
    /// Working field: `Q` or `Q(zeta N)`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct One {
    #[arg(long)]
    pub f: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cyclic / dihedral / disintegrated classification with witnesses.
    Classify(One),
    /// All maximal decomposition chains.
    Decompose(One),
    /// Engstrom refinement of a∘b = c∘d.
    Engstrom {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        d: String,
    },
    /// The symmetry group Γ(f).
    Gamma {
        #[arg(long)]
        f: String,
        /// Report the in-field subgroup instead of requiring all of Γ.
        #[arg(long)]
        in_field: bool,
    },
    /// Linear maps commuting with an iterate of f.
    MInfinity {
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 3)]
        bound: u32,
    },
    /// Checks f∘p = p∘η.
    SemiconjCheck {
        #[arg(long)]
        f: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        eta: String,
    },
    /// All η with f∘p = p∘η.
    SolveEta {
        #[arg(long)]
        f: String,
        #[arg(long)]
        p: String,
    },
    /// All p with f∘p = p∘η and deg p ≤ deg-bound.
    SolveP {
        #[arg(long)]
        f: String,
        #[arg(long)]
        eta: String,
        #[arg(long, default_value_t = 4)]
        deg_bound: usize,
    },
    /// Normal form of a semiconjugacy with coprime degrees.
    Inou {
        #[arg(long)]
        f: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        eta: String,
    },
    /// Bounded search for a common semiconjugate of f^N and g^N.
    CommonSemiconj {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = semiconj::DEFAULT_N_MAX)]
        nmax: u32,
        #[arg(long, default_value_t = semiconj::DEFAULT_DEG_CAP)]
        deg_cap: usize,
    },
    /// Partition of a family by common semiconjugates.
    ApproxClasses {
        #[arg(long = "f", required = true, value_delimiter = ',')]
        fs: Vec<String>,
        #[arg(long, default_value_t = semiconj::DEFAULT_N_MAX)]
        nmax: u32,
        #[arg(long, default_value_t = semiconj::DEFAULT_DEG_CAP)]
        deg_cap: usize,
    },
    /// Image of a curve under (x, y) ↦ (f(x), g(y)).
    CurveImage {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Minimal period of a curve under (f, g), with its image chain.
    CurvePeriod {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 6)]
        nmax: u32,
    },
    /// Periodic graph curves y = g(x), x = g(y) of f × f.
    MsDiagonal {
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 9)]
        deg_cap: usize,
        #[arg(long, default_value_t = 3)]
        iter_bound: u32,
    },
    /// c₁(d, n).
    BoundC1(BoundArgs),
    /// c(d, n) with its recursion trace.
    BoundC(BoundArgs),
    /// Orbit of (x0, y0) under (f1, f2).
    Orbit {
        #[command(flatten)]
        split: SplitArgs,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Exact return set to a curve.
    ReturnSet {
        #[command(flatten)]
        split: SplitArgs,
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Mod-p return sets over several primes and their intersection.
    ReturnSetModp {
        #[command(flatten)]
        split: SplitArgs,
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, required = true, value_delimiter = ',')]
        primes: Vec<u64>,
    },
    /// Writes a finite set as a union of arithmetic progressions.
    Progressions {
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
        #[arg(long)]
        horizon: usize,
    },
    /// Preperiodicity or escape of a point.
    Preperiodic {
        #[arg(long)]
        f: String,
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = dml::DEFAULT_HEIGHT_CAP)]
        height_cap: u64,
    },
    /// Runs one job described by a JSON file.
    Run {
        #[arg(long)]
        job: String,
    },
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    pub d: u64,
    pub n: u64,
    /// Materialize values up to this many bits.
    #[arg(long, default_value_t = msclass::constants::DEFAULT_EXACT_BITS)]
    pub exact_bits: u64,
}

#[derive(Args, Debug)]
pub struct SplitArgs {
    #[arg(long)]
    pub f1: String,
    #[arg(long)]
    pub f2: String,
    #[arg(long)]
    pub x0: String,
    #[arg(long)]
    pub y0: String,
    #[arg(long, default_value_t = dml::DEFAULT_HEIGHT_CAP)]
    pub height_cap: u64,
}

/// Exit status and the printed document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

enum Failure {
    Parse(ParseError),
    Core(Error),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

struct Ctx {
    field: Field,
    explicit: bool,
}

impl Ctx {
    fn poly(&self, text: &str) -> Run<Poly> {
        Ok(parse::parse_poly_in(text, &self.field, self.explicit)?)
    }

    fn scalar(&self, text: &str) -> Run<Scalar> {
        Ok(parse::parse_scalar(text, &self.field, self.explicit)?)
    }

    fn curve(&self, text: &str) -> Run<BivarCurve> {
        Ok(parse::parse_curve(text, &self.field, self.explicit)?)
    }

    /// Parses several inputs and puts them over one field (a header in any
    /// of them decides it).
    fn polys(&self, texts: &[&str]) -> Run<Vec<Poly>> {
        let ps = texts.iter().map(|t| self.poly(t)).collect::<Run<Vec<_>>>()?;
        unify(ps)
    }
}

fn unify(ps: Vec<Poly>) -> Run<Vec<Poly>> {
    let target = ps
        .iter()
        .map(|p| p.field().clone())
        .find(|f| !f.is_rational())
        .unwrap_or_else(Field::rationals);
    ps.into_iter()
        .map(|p| p.with_field(&target).map_err(Failure::Core))
        .collect()
}

fn s<T: ToString>(v: &T) -> Value {
    Value::String(v.to_string())
}

fn hint_doc(h: &ExtensionHint) -> Value {
    json!({ "equation": h.equation, "cyclotomic_order": h.cyclotomic_order })
}

fn witness_doc(w: &Witness) -> Value {
    match w {
        Witness::InField(l) => json!({ "in_field": s(l) }),
        Witness::NeedsExtension(h) => json!({ "needs_extension": hint_doc(h) }),
    }
}

fn group_doc(g: &LinearGroup, a: Option<&Poly>) -> Value {
    let elements: Vec<Value> = g
        .elements
        .iter()
        .map(|e| json!({ "ell": s(&e.ell), "companion": s(&e.companion) }))
        .collect();
    let mut m = Map::new();
    m.insert("kind".into(), json!(if g.kind == GroupKind::Infinite { "infinite" } else { "finite" }));
    m.insert("order".into(), json!(g.order()));
    m.insert("elements".into(), Value::Array(elements));
    m.insert("generator".into(), json!(g.generator.as_ref().map(|e| e.ell.to_string())));
    m.insert("check_group".into(), json!(g.check_group()));
    if let Some(a) = a {
        m.insert("verified".into(), json!(g.verify_for(a)));
    }
    Value::Object(m)
}

fn chain_doc(c: &PeriodCertificate, f: &Poly, g: &Poly) -> Value {
    json!({
        "curve": s(&c.curve),
        "period": c.period,
        "image_chain": c.image_chain.iter().map(s).collect::<Vec<_>>(),
        "verified": c.verify(f, g),
    })
}

fn constant_doc(c: &ConstantExpr) -> Value {
    json!({
        "value": s(c),
        "exact": !c.is_symbolic(),
        "log2": c.log2_estimate(),
    })
}

fn scalar_pair(p: &(Scalar, Scalar)) -> Value {
    json!([s(&p.0), s(&p.1)])
}

fn progression_doc(ps: &[Progression]) -> Value {
    Value::Array(ps.iter().map(|p| json!({ "a": p.a, "b": p.b })).collect())
}

fn execute(cmd: &Command, ctx: &Ctx) -> Run<Value> {
    let out = match cmd {
        Command::Classify(One { f }) => {
            let f = ctx.poly(f)?;
            let r = conjugacy::classify(&f)?;
            let d = f.degree();
            let power_ok = match &r.conj_to_power {
                Some(Witness::InField(l)) => Some(l.conjugate(&f)? == Poly::x_pow(f.field(), d)),
                _ => None,
            };
            json!({
                "f": s(&f),
                "is_cyclic": r.is_cyclic,
                "is_dihedral": r.is_dihedral,
                "dihedral_over_closure": r.dihedral_over_closure,
                "conj_to_power": r.conj_to_power.as_ref().map(witness_doc),
                "conj_to_power_verified": power_ok,
                "conj_to_pm_chebyshev": r.conj_to_pm_chebyshev.as_ref().map(|(sign, w)| json!({ "sign": sign, "witness": witness_doc(w) })),
                "disintegrated": r.disintegrated,
            })
        }
        Command::Decompose(One { f }) => {
            let f = ctx.poly(f)?;
            let chains = decompose::complete_decompositions(&f)?;
            let docs: Vec<Value> = chains
                .iter()
                .map(|c| {
                    json!({
                        "factors": c.factors.iter().map(s).collect::<Vec<_>>(),
                        "degrees": c.degrees(),
                        "verified": c.recompose() == f,
                    })
                })
                .collect();
            json!({ "f": s(&f), "chains": docs })
        }
        Command::Engstrom { a, b, c, d } => {
            let v = ctx.polys(&[a, b, c, d])?;
            let cert = decompose::engstrom_refine(&v[0], &v[1], &v[2], &v[3])?;
            json!({
                "g": s(&cert.g),
                "h": s(&cert.h),
                "a_hat": s(&cert.a_hat),
                "b_hat": s(&cert.b_hat),
                "c_hat": s(&cert.c_hat),
                "d_hat": s(&cert.d_hat),
                "link": cert.link.as_ref().map(|l| l.to_string()),
                "verified": cert.verify(&v[0], &v[1], &v[2], &v[3]),
            })
        }
        Command::Gamma { f, in_field } => {
            let f = ctx.poly(f)?;
            if *in_field {
                let (g, closure) = symmetry::gamma_group_in_field(&f)?;
                json!({ "f": s(&f), "group": group_doc(&g, Some(&f)), "closure_order": closure })
            } else {
                let g = symmetry::gamma_group(&f)?;
                json!({ "f": s(&f), "group": group_doc(&g, Some(&f)) })
            }
        }
        Command::MInfinity { f, bound } => {
            let f = ctx.poly(f)?;
            let m = symmetry::m_infinity(&f, *bound)?;
            json!({
                "f": s(&f),
                "group": group_doc(&m.group, None),
                "closure_order": m.closure_order,
                "iter_bound": m.iter_bound,
                "stable": m.stable,
            })
        }
        Command::SemiconjCheck { f, p, eta } => {
            let v = ctx.polys(&[f, p, eta])?;
            json!({ "holds": semiconj::semiconj_check(&v[0], &v[1], &v[2]) })
        }
        Command::SolveEta { f, p } => {
            let v = ctx.polys(&[f, p])?;
            let sols = semiconj::solve_eta_all(&v[0], &v[1])?;
            json!({
                "solutions": sols.iter().map(s).collect::<Vec<_>>(),
                "verified": sols.iter().all(|e| semiconj::semiconj_check(&v[0], &v[1], e)),
            })
        }
        Command::SolveP { f, eta, deg_bound } => {
            let v = ctx.polys(&[f, eta])?;
            let r = semiconj::solve_p(&v[0], &v[1], *deg_bound)?;
            let verified = r.solutions.iter().all(|p| semiconj::semiconj_check(&v[0], p, &v[1]));
            let skipped: Vec<Value> = r
                .skipped
                .iter()
                .map(|(d, h)| json!({ "degree": d, "hint": hint_doc(h) }))
                .collect();
            let sols = r.into_result()?;
            json!({
                "solutions": sols.iter().map(s).collect::<Vec<_>>(),
                "skipped": skipped,
                "verified": verified,
            })
        }
        Command::Inou { f, p, eta } => {
            let v = ctx.polys(&[f, p, eta])?;
            let w = SemiconjWitness::new(v[0].clone(), v[1].clone(), v[2].clone());
            let nf = semiconj::inou_normal_form(&w)?;
            json!({
                "ell1": s(&nf.ell1),
                "ell2": s(&nf.ell2),
                "b": nf.b,
                "c": nf.c,
                "P": s(&nf.big_p),
                "congruence_c_b_mod_deg": nf.congruence_flag,
                "congruence_c_deg_mod_b": nf.degree_congruence_flag,
                "verified": nf.verify(&w),
            })
        }
        Command::CommonSemiconj { f, g, nmax, deg_cap } => {
            let v = ctx.polys(&[f, g])?;
            let r = semiconj::common_semiconjugate(&v[0], &v[1], *nmax, *deg_cap)?;
            json!({
                "found": r.witness.is_some(),
                "witness": r.witness.as_ref().map(|w| json!({
                    "n": w.n, "eta": s(&w.eta), "p": s(&w.p), "q": s(&w.q),
                    "verified": w.verify(&v[0], &v[1]),
                })),
                "transcript": r.transcript,
                "hit_cap": r.hit_cap,
            })
        }
        Command::ApproxClasses { fs, nmax, deg_cap } => {
            let texts: Vec<&str> = fs.iter().map(String::as_str).collect();
            let v = ctx.polys(&texts)?;
            let part = semiconj::approx_classes(&v, *nmax, *deg_cap)?;
            let classes: Vec<Value> = part
                .classes
                .iter()
                .map(|c| {
                    json!({
                        "members": c.members,
                        "theta": c.theta.as_ref().map(|t| t.to_string()),
                        "n": c.n,
                        "maps": c.maps.iter().map(s).collect::<Vec<_>>(),
                        "verified": c.verify(&v),
                    })
                })
                .collect();
            json!({ "classes": classes, "at_caps": part.at_caps })
        }
        Command::CurveImage { curve, f, g } => {
            let c = ctx.curve(curve)?;
            let v = unify(vec![ctx.poly(f)?, ctx.poly(g)?])?;
            let (v, c) = same_field(v, c)?;
            match msclass::curve_image(&c, &v[0], &v[1]) {
                Ok(img) => json!({ "curve": s(&c), "image": s(&img), "collapsed": false }),
                Err(Error::Collapsed(m)) => json!({ "curve": s(&c), "image": null, "collapsed": true, "reason": m }),
                Err(e) => return Err(e.into()),
            }
        }
        Command::CurvePeriod { curve, f, g, nmax } => {
            let c = ctx.curve(curve)?;
            let v = unify(vec![ctx.poly(f)?, ctx.poly(g)?])?;
            let (v, c) = same_field(v, c)?;
            let r = msclass::curve_period(&c, &v[0], &v[1], *nmax)?;
            json!({
                "curve": s(&c),
                "nmax": nmax,
                "periodic": r.is_some(),
                "certificate": r.as_ref().map(|cert| chain_doc(cert, &v[0], &v[1])),
            })
        }
        Command::MsDiagonal { f, deg_cap, iter_bound } => {
            let f = ctx.poly(f)?;
            let found = msclass::ms_diagonal_curves(&f, *deg_cap, *iter_bound)?;
            let docs: Vec<Value> = found
                .iter()
                .map(|d| {
                    json!({
                        "g": s(&d.g),
                        "mirrored": d.mirrored,
                        "commuting_iterate": d.commuting_iterate,
                        "certificate": chain_doc(&d.certificate, &f, &f),
                    })
                })
                .collect();
            json!({ "f": s(&f), "curves": docs })
        }
        Command::BoundC1(b) => {
            let c = msclass::constants::bound_c1_with(b.d, b.n, b.exact_bits)?;
            json!({ "d": b.d, "n": b.n, "c1": constant_doc(&c) })
        }
        Command::BoundC(b) => {
            let c = msclass::constants::bound_c_with(b.d, b.n, b.exact_bits)?;
            let mut trace = Vec::new();
            for k in 1..=b.n {
                let ck = msclass::constants::bound_c_with(b.d, k, b.exact_bits)?;
                let c1 = if k >= 2 {
                    Some(constant_doc(&msclass::constants::bound_c1_with(b.d, k, b.exact_bits)?))
                } else {
                    None
                };
                trace.push(json!({ "n": k, "c": constant_doc(&ck), "c1": c1 }));
            }
            let closed = (b.n == 2).then(|| {
                let v = msclass::closed_form_c2(b.d);
                json!({ "value": v.to_string(), "matches": c.exact() == Some(&v) })
            });
            json!({ "d": b.d, "n": b.n, "c": constant_doc(&c), "trace": trace, "closed_form": closed })
        }
        Command::Orbit { split, n } => {
            let (f1, f2, alpha) = split_inputs(ctx, split)?;
            let o = dml::orbit(&f1, &f2, alpha, *n, split.height_cap);
            json!({
                "points": o.points.iter().map(|p| json!({ "n": p.index, "point": scalar_pair(&p.point) })).collect::<Vec<_>>(),
                "truncated_at": o.truncated_at,
            })
        }
        Command::ReturnSet { split, curve, n } => {
            let (f1, f2, alpha) = split_inputs(ctx, split)?;
            let c = ctx.curve(curve)?;
            let (v, c) = same_field(vec![f1, f2], c)?;
            let r = dml::return_set_exact(&v[0], &v[1], alpha, &c, *n, split.height_cap);
            let checked = r.truncated_at.map_or(*n, |t| t.saturating_sub(1));
            let prog = match r.truncated_at {
                Some(0) => None,
                _ => dml::progression_decompose(&r.indices, checked).map(|p| progression_doc(&p)),
            };
            json!({
                "curve": s(&c),
                "horizon": n,
                "checked_through": r.truncated_at.map_or(Some(*n), |t| t.checked_sub(1)),
                "indices": r.indices,
                "truncated_at": r.truncated_at,
                "progressions": prog,
            })
        }
        Command::ReturnSetModp { split, curve, n, primes } => {
            let (f1, f2, alpha) = split_inputs(ctx, split)?;
            let c = ctx.curve(curve)?;
            let (v, c) = same_field(vec![f1, f2], c)?;
            let summary = dml::return_set_modp_many(&v[0], &v[1], &alpha, &c, primes, *n);
            let mut per = Vec::new();
            for (p, r) in &summary.per_prime {
                match r {
                    Ok(set) => per.push(json!({ "p": p, "indices": set })),
                    Err(Error::BadReduction { reason, .. }) => per.push(json!({ "p": p, "bad_reduction": reason })),
                    Err(e) => return Err(Failure::Core(e.clone())),
                }
            }
            json!({ "curve": s(&c), "horizon": n, "per_prime": per, "intersection": summary.intersection })
        }
        Command::Progressions { set, horizon } => {
            let r = dml::progression_decompose(set, *horizon);
            json!({
                "set": set,
                "horizon": horizon,
                "progressions": r.as_ref().map(|p| progression_doc(p)),
                "verified": r.as_ref().map(|p| dml::expand_progressions(p, *horizon) == {
                    let mut v = set.clone();
                    v.sort_unstable();
                    v.dedup();
                    v
                }),
            })
        }
        Command::Preperiodic { f, a, n, height_cap } => {
            let f = ctx.poly(f)?;
            let a = ctx.scalar(a)?;
            match dml::preperiodic_check(&f, &a, *n, *height_cap) {
                PreperiodicOutcome::Preperiodic { tail, period } => {
                    json!({ "outcome": "preperiodic", "tail": tail, "period": period })
                }
                PreperiodicOutcome::Escape(cert) => json!({
                    "outcome": "escape",
                    "index": cert.index,
                    "value": cert.value.to_string(),
                    "radius": cert.radius.to_string(),
                    "verified": cert.verify(&f),
                }),
                PreperiodicOutcome::Unknown => json!({ "outcome": "unknown" }),
            }
        }
        Command::Run { .. } => unreachable!("jobs are expanded before dispatch"),
    };
    Ok(out)
}

fn split_inputs(ctx: &Ctx, a: &SplitArgs) -> Run<(Poly, Poly, (Scalar, Scalar))> {
    let v = ctx.polys(&[&a.f1, &a.f2])?;
    let x0 = ctx.scalar(&a.x0)?;
    let y0 = ctx.scalar(&a.y0)?;
    let mut it = v.into_iter();
    Ok((it.next().expect("two"), it.next().expect("two"), (x0, y0)))
}

fn same_field(v: Vec<Poly>, c: BivarCurve) -> Run<(Vec<Poly>, BivarCurve)> {
    let cf = c.field().clone();
    if cf.is_rational() {
        let pf = v[0].field().clone();
        if pf.is_rational() {
            return Ok((v, c));
        }
        let rows = c.poly().rows().iter().map(|r| r.with_field(&pf)).collect::<Result<Vec<_>, _>>()?;
        let c = BivarCurve::new(ritt_core::algebra::BiPoly::new(&pf, rows))?;
        return Ok((v, c));
    }
    let v = v.into_iter().map(|p| p.with_field(&cf)).collect::<Result<Vec<_>, _>>()?;
    Ok((v, c))
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Classify(_) => "classify",
        Command::Decompose(_) => "decompose",
        Command::Engstrom { .. } => "engstrom",
        Command::Gamma { .. } => "gamma",
        Command::MInfinity { .. } => "m-infinity",
        Command::SemiconjCheck { .. } => "semiconj-check",
        Command::SolveEta { .. } => "solve-eta",
        Command::SolveP { .. } => "solve-p",
        Command::Inou { .. } => "inou",
        Command::CommonSemiconj { .. } => "common-semiconj",
        Command::ApproxClasses { .. } => "approx-classes",
        Command::CurveImage { .. } => "curve-image",
        Command::CurvePeriod { .. } => "curve-period",
        Command::MsDiagonal { .. } => "ms-diagonal",
        Command::BoundC1(_) => "bound-c1",
        Command::BoundC(_) => "bound-c",
        Command::Orbit { .. } => "orbit",
        Command::ReturnSet { .. } => "return-set",
        Command::ReturnSetModp { .. } => "return-set-modp",
        Command::Progressions { .. } => "progressions",
        Command::Preperiodic { .. } => "preperiodic",
        Command::Run { .. } => "run",
    }
}

/// Exit status and error document for a failure. Collapsed images,
/// exhausted searches and bad reductions are answers, not failures.
fn failure_doc(f: &Failure) -> (i32, Value) {
    let (code, kind, message, hint) = match f {
        Failure::Parse(ParseError::Cap(m)) => (EXIT_CAP, "resource_cap", m.clone(), None),
        Failure::Parse(e) => (EXIT_INPUT, "input", e.to_string(), None),
        Failure::Core(e) => match e {
            Error::ResourceCap(_) => (EXIT_CAP, "resource_cap", e.to_string(), None),
            Error::FieldExtensionRequired(h) => (EXIT_EXTENSION, "field_extension_required", e.to_string(), Some(hint_doc(h))),
            Error::Collapsed(_) => (EXIT_OK, "collapsed", e.to_string(), None),
            Error::SearchExhausted(_) => (EXIT_OK, "not_found", e.to_string(), None),
            Error::BadReduction { .. } => (EXIT_OK, "bad_reduction", e.to_string(), None),
            Error::Hypothesis(_) => (EXIT_INPUT, "hypothesis", e.to_string(), None),
            _ => (EXIT_INPUT, "input", e.to_string(), None),
        },
    };
    let status = if code == EXIT_OK { "answered" } else { "error" };
    let mut m = Map::new();
    m.insert("status".into(), json!(status));
    m.insert("kind".into(), json!(kind));
    m.insert("message".into(), json!(message));
    if let Some(h) = hint {
        m.insert("hint".into(), h);
    }
    (code, Value::Object(m))
}

fn render(v: &Value) -> String {
    let mut out = serde_json::to_string_pretty(v).expect("serializable");
    out.push('\n');
    out
}

/// Converts a job document into an argument vector.
///
/// `{"command": "...", "field": "...", "positional": [...], "args": {...}}`;
/// list values become repeated flags and `true` becomes a bare flag.
pub fn job_to_argv(job: &Value) -> std::result::Result<Vec<String>, String> {
    let obj = job.as_object().ok_or("job must be a JSON object")?;
    let allowed = ["command", "field", "positional", "args"];
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(format!("unknown job key `{k}`"));
    }
    let command = obj
        .get("command")
        .and_then(Value::as_str)
        .ok_or("job needs a string `command`")?;
    if command == "run" {
        return Err("jobs cannot nest `run`".into());
    }
    let scalar = |v: &Value| -> std::result::Result<String, String> {
        match v {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            other => Err(format!("unsupported job value {other}")),
        }
    };
    let mut argv = vec!["ritt-kit".to_string(), command.to_string()];
    if let Some(f) = obj.get("field") {
        argv.push("--field".into());
        argv.push(scalar(f)?);
    }
    if let Some(p) = obj.get("positional") {
        for v in p.as_array().ok_or("`positional` must be a list")? {
            argv.push(scalar(v)?);
        }
    }
    if let Some(a) = obj.get("args") {
        let a = a.as_object().ok_or("`args` must be an object")?;
        for (k, v) in a {
            let flag = format!("--{}", k.replace('_', "-"));
            match v {
                Value::Bool(true) => argv.push(flag),
                Value::Bool(false) => {}
                Value::Array(items) => {
                    for it in items {
                        argv.push(flag.clone());
                        argv.push(scalar(it)?);
                    }
                }
                other => {
                    argv.push(flag);
                    argv.push(scalar(other)?);
                }
            }
        }
    }
    Ok(argv)
}

fn input_error(command: &str, message: String) -> Outcome {
    let doc = json!({ "command": command, "status": "error", "kind": "input", "message": message });
    Outcome {
        code: EXIT_INPUT,
        stdout: render(&doc),
    }
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: EXIT_OK,
                    stdout: e.to_string(),
                };
            }
            return input_error("", e.render().to_string());
        }
    };
    if let Command::Run { job } = &cli.command {
        let text = match std::fs::read_to_string(job) {
            Ok(t) => t,
            Err(e) => return input_error("run", format!("cannot read {job}: {e}")),
        };
        let value: Value = match serde_json::from_str(&text) {
            Ok(v) => v,
            Err(e) => return input_error("run", format!("job is not valid JSON: {e}")),
        };
        return match job_to_argv(&value) {
            Ok(argv) => run(argv),
            Err(m) => input_error("run", m),
        };
    }
    let name = command_name(&cli.command);
    let ctx = match &cli.field {
        None => Ok(Ctx {
            field: Field::rationals(),
            explicit: false,
        }),
        Some(t) => parse::parse_field(t).map(|field| Ctx { field, explicit: true }),
    };
    let result = match ctx {
        Ok(ctx) => execute(&cli.command, &ctx).map(|v| (ctx.field.to_string(), v)),
        Err(e) => Err(Failure::Parse(e)),
    };
    let mut doc = BTreeMap::new();
    doc.insert("command".to_string(), json!(name));
    let code = match result {
        Ok((field, v)) => {
            doc.insert("field".into(), json!(field));
            doc.insert("status".into(), json!("ok"));
            doc.insert("result".into(), v);
            EXIT_OK
        }
        Err(f) => {
            let (code, v) = failure_doc(&f);
            if let Value::Object(m) = v {
                doc.extend(m);
            }
            code
        }
    };
    Outcome {
        code,
        stdout: render(&json!(doc)),
    }
}
