//! Quick property checks over the bundled fixtures.

use serde::Serialize;

use crate::bounds::{szpiro_constant, theorem12_bounds};
use crate::ea::{ea_reduction_mismatches, EaParams};
use crate::eds::{division_poly_link_check, sequence, strong_divisibility_failures, valuation_transfer_all};
use crate::error::Result;
use crate::factor::Budget;
use crate::fixtures::{ISOGENIES, POINTS};
use crate::heights::{canonical_height, isogeny_height_residual};
use crate::real::Real;
use crate::sieve::{record_invariants_hold, sieve_magnified};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    match f() {
        Ok((passed, detail)) => CheckResult { name, passed, detail },
        Err(e) => CheckResult { name, passed: false, detail: format!("error: {e}") },
    }
}

pub fn run(prec: usize) -> Vec<CheckResult> {
    let tol = Real::parse("1e-8", prec);
    vec![
        check("strong_divisibility", || {
            let mut bad = Vec::new();
            for f in POINTS {
                let s = sequence(&f.curve(), &f.point(), 30)?;
                if !strong_divisibility_failures(&s).is_empty() {
                    bad.push(f.name);
                }
            }
            Ok((bad.is_empty(), format!("{} fixtures, n ≤ 30, failing: {bad:?}", POINTS.len())))
        }),
        check("division_polynomials", || {
            let mut bad = Vec::new();
            for f in POINTS {
                let e = f.curve();
                let p = f.point();
                let x = p.x().expect("affine").clone();
                let mut dp = crate::divpoly::DivisionPolynomials::new(&e);
                for n in 1..=8usize {
                    let q = e.mul(n as i64, &p)?;
                    if q.x().expect("non-torsion") * dp.psi_sq(n).eval(&x) != dp.phi(n).eval(&x) {
                        bad.push((f.name, n));
                    }
                }
            }
            Ok((bad.is_empty(), format!("n ≤ 8, failing: {bad:?}")))
        }),
        check("isogeny_height_identity", || {
            let mut worst = Real::zero(prec);
            for f in ISOGENIES {
                let r = isogeny_height_residual(&f.isogeny()?, &f.base().point(), prec)?;
                worst = worst.max(&r);
            }
            Ok((worst < tol, format!("max residual {}", worst.to_decimal(6))))
        }),
        check("link_and_valuations", || {
            let mut bad = Vec::new();
            for f in ISOGENIES {
                let s = f.isogeny()?;
                let e = &s.domain;
                let p = f.base().point();
                let mut q = p.clone();
                for n in 1..=6 {
                    if !division_poly_link_check(&s, &q, prec)?.ok || !valuation_transfer_all(&s, &q)? {
                        bad.push((f.name, n));
                    }
                    q = e.add(&q, &p)?;
                }
            }
            Ok((bad.is_empty(), format!("n ≤ 6, failing: {bad:?}")))
        }),
        check("height_quadraticity", || {
            let mut worst = Real::zero(prec);
            for f in POINTS {
                let e = f.curve();
                let p = f.point();
                let h1 = canonical_height(&e, &p, prec)?.canonical_h;
                let h3 = canonical_height(&e, &e.mul(3, &p)?, prec)?.canonical_h;
                worst = worst.max(&(h3 - h1.mul_i64(9)).abs());
            }
            Ok((worst < tol, format!("max |ĥ(3P) − 9ĥ(P)| = {}", worst.to_decimal(6))))
        }),
        check("ea_reduction_table", || {
            let mut bad = Vec::new();
            for a in 1..=100 {
                if let Ok(p) = EaParams::from_i64(a) {
                    if !ea_reduction_mismatches(&p).is_empty() {
                        bad.push(a);
                    }
                }
            }
            Ok((bad.is_empty(), format!("A ≤ 100, mismatches: {bad:?}")))
        }),
        check("bound_substitution", || {
            let one = Real::one(prec);
            let cs = szpiro_constant(&one);
            let t = theorem12_bounds(&one, &one)?;
            let rel = ((&cs - Real::parse("2.56e14", prec)) / &cs).abs();
            let ok = rel < Real::parse("1e-12", prec) && t.composite == Real::from_i64(490_000, prec) && t.n3 == Real::from_i64(77, prec);
            Ok((ok, format!("C(1) = {}, composite = {}, N3 = {}", cs.to_decimal(4), t.composite.to_decimal(4), t.n3.to_decimal(4))))
        }),
        check("sieve_invariants", || {
            let f = ISOGENIES.iter().find(|f| f.name == "E25-2isog").expect("fixture");
            let recs = sieve_magnified(&f.isogeny()?, &f.base().point(), 8, &Budget::default())?;
            let n_i = recs.iter().filter(|r| r.in_i == Some(true)).count();
            Ok((record_invariants_hold(&recs), format!("E25, n ≤ 8, {n_i} indices with at most one new prime")))
        }),
    ]
}

pub fn all_pass(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes() {
        let r = run(128);
        assert!(all_pass(&r), "{r:#?}");
    }
}
