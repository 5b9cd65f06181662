use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use edslab::bounds::{self, BoundInputs, BoundReport};
use edslab::curve::{Curve, Point};
use edslab::ea::{self, EaParams};
use edslab::eds::{division_poly_link_check, sequence, strong_divisibility_failures, term, EdsTerm};
use edslab::factor::Budget;
use edslab::heights::{canonical_height, curve_height, elliptic_log, isogeny_height_residual, ShortModel};
use edslab::isogeny::{from_spec, Isogeny};
use edslab::real::Real;
use edslab::sieve::{brute_force_thue, emit_thue, sieve_magnified, ThueInstance};
use edslab::tate::{bad_primes, conductor_and_szpiro, ensure_minimal, minimal_model, tate_reduction};
use edslab::{selftest, Error, Result};

use crate::render::{big, curve as curve_json, point as point_json, poly, real};
use crate::{BoundName, BoundsArgs, Cli, Command, CurveCmd, CurvePoint, EaCmd, EdsCmd, IsogenyCmd, Output, RunConfig, ThueCmd};

pub fn run(cli: &Cli) -> Result<Output> {
    let cfg = &cli.cfg;
    let prec = cfg.prec();
    match &cli.cmd {
        Command::Curve { cmd: CurveCmd::Info { curve } } => curve_info(&parse_curve(curve)?, prec).map(Into::into),
        Command::Eds { cmd } => eds(cmd).map(Into::into),
        Command::Heights(at) => heights(at, prec).map(Into::into),
        Command::Isogeny { cmd } => isogeny(cmd, prec).map(Into::into),
        Command::Bounds(args) => bounds_cmd(args, prec).map(Into::into),
        Command::Sieve { at, isogeny, max_n } => sieve(at, isogeny, *max_n, cfg),
        Command::Thue { cmd } => thue(cmd, cfg).map(Into::into),
        Command::Ea { cmd: EaCmd::Check { a, point, max_n, m } } => ea_check(a, point, *max_n, *m, prec).map(Into::into),
        Command::Selftest => {
            let r = selftest::run(prec);
            let passed = selftest::all_pass(&r);
            Ok(Output { value: json!({ "passed": passed, "checks": r }), partial: false, code: (!passed).then_some(1) })
        }
    }
}

fn parse_curve(s: &str) -> Result<Curve> {
    Curve::parse(s)
}

fn parse_point(s: &str) -> Result<Point> {
    Point::parse(s.trim().trim_start_matches('(').trim_end_matches(')'))
}

fn parse_real(s: &str, what: &str, prec: usize) -> Result<Real> {
    if s.trim().parse::<f64>().is_err() {
        return Err(Error::Parse(format!("{what}: bad decimal {s:?}")));
    }
    Ok(Real::parse(s.trim(), prec))
}

fn curve_point(at: &CurvePoint) -> Result<(Curve, Point)> {
    let e = parse_curve(&at.curve)?;
    let p = parse_point(&at.point)?;
    e.check(&p)?;
    Ok((e, p))
}

fn curve_info(e: &Curve, prec: usize) -> Result<Value> {
    let minimal = ensure_minimal(e).is_ok();
    let mm = minimal_model(e)?;
    let table: Vec<Value> = bad_primes(e)?
        .iter()
        .map(|p| {
            let r = tate_reduction(e, p);
            json!({ "p": big(&r.p), "kodaira": r.kodaira.to_string(), "ord_disc": r.ord_disc, "f_p": r.f_p, "minimal_at_p": r.is_minimal_at_p })
        })
        .collect();
    let (conductor, szpiro) = match conductor_and_szpiro(e, prec) {
        Ok(c) => (big(&c.conductor), real(&c.szpiro)),
        Err(Error::DegenerateSzpiro) => (Value::String("1".into()), Value::Null),
        Err(_) => (Value::Null, Value::Null),
    };
    Ok(json!({
        "curve": curve_json(e),
        "b2": big(e.b2()), "b4": big(e.b4()), "b6": big(e.b6()), "b8": big(e.b8()),
        "c4": big(e.c4()), "c6": big(e.c6()),
        "discriminant": big(e.disc()),
        "j": edslab::arith::fmt_rational(e.j()),
        "standardized": e.is_standardized(),
        "minimal": minimal,
        "minimal_model": curve_json(&mm.curve),
        "height": real(&curve_height(&mm.curve, prec)?),
        "conductor": conductor,
        "szpiro_ratio": szpiro,
        "reduction": table,
    }))
}

fn eds_term(t: &EdsTerm) -> Value {
    json!({ "n": t.n, "A": big(&t.a), "B": big(&t.b), "C": big(&t.c), "is_infinity": t.is_infinity })
}

fn eds(cmd: &EdsCmd) -> Result<Value> {
    match cmd {
        EdsCmd::Term { at, n } => {
            let (e, p) = curve_point(at)?;
            Ok(eds_term(&term(&e, &p, *n)?))
        }
        EdsCmd::Seq { at, max_n } => {
            let (e, p) = curve_point(at)?;
            let s = sequence(&e, &p, *max_n)?;
            let bad: Vec<[u64; 2]> = strong_divisibility_failures(&s).into_iter().map(|(a, b)| [a, b]).collect();
            Ok(json!({ "terms": s.iter().map(eds_term).collect::<Vec<_>>(), "strong_divisibility_failures": bad }))
        }
    }
}

fn heights(at: &CurvePoint, prec: usize) -> Result<Value> {
    let (e, p) = curve_point(at)?;
    let r = canonical_height(&e, &p, prec)?;
    let local: Map<String, Value> = r.local_canonical.iter().map(|(p, h)| (p.to_string(), real(h))).collect();
    let short = ShortModel::new(&e);
    let elog = match elliptic_log(&short.curve, &ShortModel::map_point(&e, &p), prec) {
        Ok(l) => json!({ "phi": real(&l.phi), "phi_t0": real(&l.phi_t0) }),
        Err(Error::BoundedComponent) | Err(Error::IdentityPoint) => Value::Null,
        Err(err) => return Err(err),
    };
    Ok(json!({
        "naive_h": real(&r.naive_h),
        "canonical_h": real(&r.canonical_h),
        "arch_canonical": real(&r.arch_canonical),
        "local_canonical": local,
        "good_part": real(&r.good_part),
        "curve_h": real(&r.curve_h),
        "multiple": r.multiple,
        "torsion": r.torsion,
        "decomposition_residual": real(&r.decomposition_residual()),
        "elliptic_log": elog,
    }))
}

fn isogeny_json(s: &Isogeny) -> Value {
    json!({
        "domain": curve_json(&s.domain),
        "codomain": curve_json(&s.codomain),
        "degree": s.degree,
        "kernel": poly(&s.kernel),
        "d_sigma": big(&s.d_sigma),
        "psi_sq": poly(&s.psi_sq),
        "phi": poly(&s.phi),
    })
}

fn isogeny(cmd: &IsogenyCmd, prec: usize) -> Result<Value> {
    let (s, pt) = match cmd {
        IsogenyCmd::Velu { curve, kernel, point } => (from_spec(&parse_curve(curve)?, &format!("kernel:{kernel}"))?, point),
        IsogenyCmd::Mult { curve, m, point } => (Isogeny::multiplication(&parse_curve(curve)?, *m)?, point),
    };
    let mut v = isogeny_json(&s);
    if let Some(pt) = pt {
        let p = parse_point(pt)?;
        s.domain.check(&p)?;
        let link = division_poly_link_check(&s, &p, prec)?;
        v["image"] = point_json(&s.image(&p)?);
        v["link"] = json!({ "low": real(&link.low), "middle": real(&link.middle), "high": real(&link.high), "exact": link.exact, "ok": link.ok });
        v["height_identity_residual"] = real(&isogeny_height_residual(&s, &p, prec)?);
    }
    Ok(v)
}

fn bound_report(b: &BoundReport) -> Value {
    let branches: Vec<Value> = b.branches.iter().map(|(n, v)| json!({ "name": n, "value": real(v) })).collect();
    json!({ "name": b.name, "value": real(&b.value), "branches": branches, "meaning": b.meaning })
}

fn bound_inputs(a: &BoundsArgs, prec: usize) -> Result<BoundInputs> {
    let mut inp = BoundInputs::new(prec);
    if let (Some(c), Some(p)) = (&a.curve, &a.point) {
        let e = parse_curve(c)?;
        let p = parse_point(p)?;
        e.check(&p)?;
        let s = match &a.isogeny {
            Some(spec) => from_spec(&e, spec)?,
            None => Isogeny::identity(&e),
        };
        inp.h_p = canonical_height(&s.domain, &p, prec)?.canonical_h;
        inp.h_sigma_p = canonical_height(&s.codomain, &s.image(&p)?, prec)?.canonical_h;
        inp.h_e_prime = curve_height(&s.domain, prec)?;
        inp.h_e = curve_height(&s.codomain, prec)?;
        inp.d = s.degree;
    }
    let set = |slot: &mut Real, v: &Option<String>, what: &str| -> Result<()> {
        if let Some(s) = v {
            *slot = parse_real(s, what, prec)?;
        }
        Ok(())
    };
    set(&mut inp.h_p, &a.h_p, "h-p")?;
    set(&mut inp.h_sigma_p, &a.h_sigma_p, "h-sigma-p")?;
    set(&mut inp.h_e, &a.h_e, "h-e")?;
    set(&mut inp.h_e_prime, &a.h_e_prime, "h-e-prime")?;
    set(&mut inp.eps, &a.eps, "eps")?;
    set(&mut inp.m, &a.m, "m")?;
    set(&mut inp.m_prime, &a.m_prime, "m-prime")?;
    if let Some(d) = a.d {
        inp.d = d;
    }
    Ok(inp)
}

fn need<'a>(v: &'a Option<String>, what: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::PreconditionViolated(format!("--{what} is required")))
}

fn bounds_cmd(a: &BoundsArgs, prec: usize) -> Result<Value> {
    let inp = bound_inputs(a, prec)?;
    let szpiro_s = || -> Result<Real> {
        match (&a.s, &a.curve) {
            (Some(s), _) => parse_real(s, "s", prec),
            (None, Some(c)) => Ok(conductor_and_szpiro(&parse_curve(c)?, prec)?.szpiro),
            (None, None) => Err(Error::PreconditionViolated("--s or --curve is required".into())),
        }
    };
    Ok(match a.name {
        BoundName::Thm12 => {
            let cs = match &a.cs {
                Some(c) => parse_real(c, "cs", prec)?,
                None => bounds::szpiro_constant(&szpiro_s()?),
            };
            let t = bounds::theorem12_bounds(&cs, &inp.h_sigma_p)?;
            json!({ "name": "thm12", "cs": real(&cs), "composite": real(&t.composite), "n1": real(&t.n1), "n3": real(&t.n3) })
        }
        BoundName::Siegel => {
            let (b1, b2) = bounds::siegel_bounds(&inp)?;
            json!({ "name": "siegel", "bound1": real(&b1), "bound2": real(&b2) })
        }
        BoundName::Gap => {
            let [n1, n2, n3]: [u64; 3] = a.indices.clone().try_into().map_err(|_| Error::PreconditionViolated("--indices needs n1,n2,n3".into()))?;
            let g = bounds::gap_principle([n1, n2, n3], &inp)?;
            json!({ "name": "gap", "case_a": real(&g.case_a), "case_b": real(&g.case_b), "threshold": real(&g.threshold), "hypotheses_ok": g.hypotheses_ok, "detail": g.detail })
        }
        BoundName::David => {
            let n = a.n.ok_or_else(|| Error::PreconditionViolated("--n is required".into()))?;
            json!({ "name": "david", "n": n, "value": real(&bounds::david_arch_bound(&inp.h_e, &inp.h_p, n)) })
        }
        BoundName::Nonuniform => {
            let (f, s) = bounds::nonuniform_bounds(&inp)?;
            json!({ "name": "nonuniform", "first": bound_report(&f), "second": bound_report(&s) })
        }
        BoundName::Szpiro => {
            let s = szpiro_s()?;
            json!({ "name": "szpiro", "s": real(&s), "value": real(&bounds::szpiro_constant(&s)) })
        }
        BoundName::Solve => {
            let d = a.deg.ok_or_else(|| Error::PreconditionViolated("--deg is required".into()))?;
            let x = parse_real(need(&a.a, "a")?, "a", prec)?;
            let y = parse_real(need(&a.b, "b")?, "b", prec)?;
            let big_a = parse_real(need(&a.big_a, "big-a")?, "big-a", prec)?;
            if x.is_negative() || y.is_negative() || !big_a.is_positive() || d == 0 {
                return Err(Error::PreconditionViolated("need a, b ≥ 0, A > 0 and d ≥ 1".into()));
            }
            json!({ "name": "solve", "value": real(&bounds::solve_n2_log(&x, &y, d as u32, &big_a)) })
        }
        BoundName::Bounded => bound_report(&bounds::bounded_component_bounds(&inp.h_p, &inp.h_e_prime)?),
        BoundName::Doubly => bound_report(&bounds::doubly_magnified_degree_bounds(&inp.h_p, &inp.h_e_prime)?),
        BoundName::Magnified => {
            let deg = a.deg.unwrap_or(inp.d);
            json!({ "name": "magnified", "value": real(&bounds::magnified_siegel_bound(&inp.h_e_prime, deg)?) })
        }
        BoundName::Lll => json!({ "name": "lll", "value": real(&bounds::lll_gap_threshold(&inp)?) }),
    })
}

fn sieve(at: &CurvePoint, spec: &str, max_n: u64, cfg: &RunConfig) -> Result<Output> {
    let (e, p) = curve_point(at)?;
    let s = from_spec(&e, spec)?;
    let recs = sieve_magnified(&s, &p, max_n, &Budget::with_rho(cfg.budget))?;
    let partial = recs.iter().any(|r| r.in_i.is_none());
    Ok(Output { value: serde_json::to_value(&recs).expect("serializable"), partial, code: None })
}

fn instance_json(i: &ThueInstance) -> Value {
    json!({ "rhs": big(&i.rhs), "rhs_value": big(&i.rhs_value), "rhs_bound": real(&i.rhs_bound), "r": i.r })
}

fn thue(cmd: &ThueCmd, cfg: &RunConfig) -> Result<Value> {
    let (at, spec, n, bx) = match cmd {
        ThueCmd::Emit { at, isogeny, n } => (at, isogeny, *n, None),
        ThueCmd::Brute { at, isogeny, n, bx } => (at, isogeny, *n, Some(*bx)),
    };
    let (e, p) = curve_point(at)?;
    let s = from_spec(&e, spec)?;
    let rep = match emit_thue(&s, n, &p, cfg.r_max, cfg.prec()) {
        Ok(r) => r,
        Err(Error::FirstAlternative) => return Ok(json!({ "n": n, "s_integral": true, "instances": [] })),
        Err(err) => return Err(err),
    };
    let mut v = json!({
        "n": rep.n,
        "s_integral": false,
        "A": big(&rep.a),
        "B": big(&rep.b),
        "form": poly(&rep.form),
        "form_degree": rep.form_degree,
        "squared": rep.squared,
        "value": big(&rep.value),
        "divides_at_r": rep.divides_at_r,
        "matched": rep.matched,
        "instances": rep.instances.iter().map(instance_json).collect::<Vec<_>>(),
    });
    if let Some(bx) = bx {
        let y = &rep.b * &rep.b;
        let mut found = Vec::new();
        for (k, inst) in rep.instances.iter().enumerate() {
            for (x0, y0) in brute_force_thue(inst, bx)? {
                found.push(json!({ "instance": k, "X": big(&x0), "Y": big(&y0), "expected": x0 == rep.a && y0 == y }));
            }
        }
        v["box"] = json!(bx);
        v["solutions"] = Value::Array(found);
    }
    Ok(v)
}

fn ea_check(a: &str, point: &str, max_n: u64, m: Option<u64>, prec: usize) -> Result<Value> {
    let a: BigInt = a.trim().parse().map_err(|_| Error::Parse(format!("bad A {a:?}")))?;
    let params = EaParams::new(&a)?;
    let e = params.curve();
    let p = parse_point(point)?;
    e.check(&p)?;
    let table: Vec<Value> = ea::ea_reduction_table(&params).iter().map(|(q, k)| json!({ "p": big(q), "kodaira": k.to_string() })).collect();
    let mismatches = ea::ea_reduction_mismatches(&params).len();
    let mut rows = Vec::new();
    for n in 1..=max_n / 2 {
        let q = e.mul_big(&BigInt::from(n), &p)?;
        let d = ea::ea_height_difference_check(&params, &q, prec)?;
        let lower = match ea::ea_height_lower_bound(&params, &q, prec) {
            Ok(l) => json!({ "bound": real(&l.bound), "height": real(&l.height), "factor_denominator": l.factor_denominator, "ok": l.ok }),
            Err(Error::BoundedComponent) => Value::Null,
            Err(err) => return Err(err),
        };
        let even = ea::ea_even_index_composite(&params, &p, n)?;
        rows.push(json!({
            "n": n,
            "difference": { "value": real(&d.value), "low": real(&d.low), "high": real(&d.high), "ok": d.ok },
            "lower_bound": lower,
            "even_index": even,
        }));
    }
    let odd = match m {
        None => Value::Null,
        Some(m) => {
            let mut out = Vec::new();
            for n in 1..=max_n / m.max(1) {
                let r = ea::ea_odd_multiple_composite(&params, &p, m, n, prec)?;
                out.push(json!({
                    "n": r.n, "threshold": r.threshold, "verdict": r.verdict, "b_np": big(&r.b_np), "direct": r.direct,
                    "new_prime": r.new_prime, "siegel_p_prime": r.siegel_p_prime, "siegel_p": r.siegel_p,
                }));
            }
            json!({ "m": m, "rows": out })
        }
    };
    Ok(json!({
        "A": big(&params.a),
        "class2": params.class2,
        "twelve_mod_16": params.is_twelve_mod_16(),
        "discriminant": big(&params.disc()),
        "reduction": table,
        "reduction_mismatches": mismatches,
        "double_has_good_reduction": ea::double_has_good_reduction(&params, &p)?,
        "even_index_threshold": ea::EVEN_INDEX_THRESHOLD,
        "rows": rows,
        "odd_multiple": odd,
    }))
}
