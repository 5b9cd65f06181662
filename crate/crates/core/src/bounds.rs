//! Explicit numeric bounds on indices of terms without new prime factors.
//!
//! Every evaluator takes measured heights and returns the stated expression;
//! disjunctive statements return the larger branch as the safe cutoff.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// Decimal constants of the bounds, kept as literals so they print exactly.
pub mod constants {
    pub const SILVERMAN_ARCH: &str = "1.07";
    pub const DAVID_C1: &str = "5.9e43";
    pub const DAVID_C2_SHIFT: &str = "2.81";
    pub const PELLARIN_SHIFT: &str = "15.8";
    pub const GAP_WINDOW: &str = "22.35";
    pub const GAP_B: &str = "23.42";
    pub const GAP_A: &str = "24.42";
    pub const GAP_HE_B: i64 = 26;
    pub const GAP_HE_A: i64 = 52;
    pub const NONUNIFORM_FIRST: [&str; 4] = ["2.1e30", "4.3e27", "8.7e23", "2e27"];
    pub const NONUNIFORM_SECOND: [&str; 4] = ["4.2e30", "4.3e27", "1.7e24", "4e27"];
    pub const THM12_COMPOSITE: (i64, i64, i64) = (18, 70, 490000);
    pub const THM12_N1: [&str; 2] = ["4.2e30", "4e27"];
    pub const THM12_N3: i64 = 77;
    pub const BOUNDED_COMPONENT: (i64, i64) = (288, 4);
    pub const DOUBLY_MAGNIFIED: (i64, i64) = (144, 2);
    pub const HEIGHT_MIX: (i64, i64) = (128, 135);
    pub const MAGNIFIED_SIEGEL: (i64, i64) = (7, 8);
    pub const LLL_FLOOR: i64 = 8;
}

use constants as k;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Meaning {
    IndexExceedingImpliesNewPrime,
    IndexExceedingImpliesTwoNewPrimes,
    UpperBoundOnIndex,
}

/// Measured inputs; fields not used by a given bound may be left at zero.
#[derive(Clone, Debug)]
pub struct BoundInputs {
    /// ĥ(P′).
    pub h_p: Real,
    /// ĥ(σ(P′)).
    pub h_sigma_p: Real,
    /// h(E), E the codomain.
    pub h_e: Real,
    /// h(E′), E′ the domain.
    pub h_e_prime: Real,
    pub d: u64,
    pub eps: Real,
    pub m: Real,
    pub m_prime: Real,
}

impl BoundInputs {
    pub fn new(prec: usize) -> BoundInputs {
        let z = Real::zero(prec);
        BoundInputs {
            h_p: z.clone(),
            h_sigma_p: z.clone(),
            h_e: z.clone(),
            h_e_prime: z.clone(),
            d: 1,
            eps: z.clone(),
            m: z.clone(),
            m_prime: z,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub name: &'static str,
    pub value: Real,
    pub branches: Vec<(&'static str, Real)>,
    pub meaning: Meaning,
}

impl BoundReport {
    fn new(name: &'static str, meaning: Meaning, branches: Vec<(&'static str, Real)>) -> BoundReport {
        let value = branches.iter().map(|b| b.1.clone()).reduce(|a, b| a.max(&b)).expect("at least one branch");
        BoundReport { name, value, branches, meaning }
    }
}

fn c(s: &str, prec: usize) -> Real {
    Real::parse(s, prec)
}

fn int(n: i64, prec: usize) -> Real {
    Real::from_i64(n, prec)
}

fn positive(x: &Real, what: &str) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(format!("{what} must be positive")))
    }
}

/// If n² ≤ a(log n + 1)^d + b then n ≤ max{A(2d·log 2d + 2·log A)^d, a/A + √b}.
pub fn solve_n2_log(a: &Real, b: &Real, d: u32, big_a: &Real) -> Real {
    let prec = a.precision();
    let two_d = int(2 * d as i64, prec);
    let first = big_a * (&two_d * two_d.ln() + big_a.ln().mul_i64(2)).powi(d as usize);
    let second = a / big_a + b.sqrt();
    first.max(&second)
}

/// Cutoffs beyond which B_{nP′} (bound1) or B_{nσ(P′)} (bound2) has a new prime factor.
pub fn siegel_bounds(inp: &BoundInputs) -> Result<(Real, Real)> {
    positive(&inp.h_p, "ĥ(P′)")?;
    let prec = inp.h_p.precision();
    let one = Real::one(prec);
    let d = int(inp.d as i64, prec);
    let slack = &d - &d * &inp.eps - &one;
    if !slack.is_positive() {
        return Err(Error::HypothesisViolated(format!("d(1 − ε) = {:?} must exceed 1", &d - &d * &inp.eps)));
    }
    let q1 = (&one - &inp.eps) * &inp.h_p;
    let b1 = int(2, prec) / &q1 + ((&inp.m_prime + &inp.h_e_prime + &inp.h_p) / &q1).sqrt();
    let q2 = &slack * &inp.h_p;
    let b2 = int(2, prec) / &q2 + ((&inp.m + &inp.h_e + &d * &inp.h_p + d.ln()) / &q2).sqrt();
    Ok((b1, b2))
}

/// ĥ_∞(nP) ≤ c₁(b_n + log 3 + 1)⁶ + h(E) + 2.81 with
/// b_n = max{log 2n, 2ĥ(P), 12e·h(E) + 5e·log 6}.
pub fn david_arch_bound(h_e: &Real, h_p: &Real, n: u64) -> Real {
    let prec = h_e.precision();
    let e = Real::one(prec).exp();
    let bn = int(2 * n as i64, prec)
        .ln()
        .max(&h_p.mul_i64(2))
        .max(&(&e * h_e.mul_i64(12) + &e * int(6, prec).ln().mul_i64(5)));
    c(k::DAVID_C1, prec) * (bn + int(3, prec).ln() + Real::one(prec)).powi(6) + h_e + c(k::DAVID_C2_SHIFT, prec)
}

pub fn nonuniform_bounds(inp: &BoundInputs) -> Result<(BoundReport, BoundReport)> {
    positive(&inp.h_p, "ĥ(P′)")?;
    positive(&inp.h_sigma_p, "ĥ(σ(P′))")?;
    let prec = inp.h_p.precision();
    let [a1, a2, a3, a4] = k::NONUNIFORM_FIRST.map(|s| c(s, prec));
    let half5 = c("2.5", prec);
    let half7 = c("3.5", prec);
    let first = BoundReport::new(
        "nonuniform_first",
        Meaning::IndexExceedingImpliesNewPrime,
        vec![
            ("constant", a1),
            ("inverse_height", &a2 / &inp.h_p),
            ("height_power", &a3 * inp.h_p.pow(&half5)),
            ("curve_height", &a4 * inp.h_e_prime.pow(&half7) / &inp.h_p),
        ],
    );
    let [b1, b2, b3, b4] = k::NONUNIFORM_SECOND.map(|s| c(s, prec));
    let second = BoundReport::new(
        "nonuniform_second",
        Meaning::IndexExceedingImpliesNewPrime,
        vec![
            ("constant", b1),
            ("inverse_height", &b2 / &inp.h_p),
            ("height_power", &b3 * inp.h_sigma_p.pow(&half5)),
            ("curve_height", &b4 * inp.h_e.pow(&half7) / &inp.h_sigma_p),
        ],
    );
    Ok((first, second))
}

/// C = max{1, (20S)⁸·10^{4S}}.
pub fn szpiro_constant(s: &Real) -> Real {
    let prec = s.precision();
    let v = s.mul_i64(20).powi(8) * int(10, prec).pow(&s.mul_i64(4));
    v.max(&Real::one(prec))
}

#[derive(Clone, Debug)]
pub struct Theorem12 {
    pub composite: Real,
    pub n1: Real,
    pub n3: Real,
}

pub fn theorem12_bounds(cs: &Real, h_sigma_p: &Real) -> Result<Theorem12> {
    let prec = cs.precision();
    if cs < &Real::one(prec) {
        return Err(Error::PreconditionViolated("C_σ must be at least 1".into()));
    }
    let (a, b, m) = k::THM12_COMPOSITE;
    let composite = (cs.mul_i64(a) * cs.mul_i64(b).ln().powi(2)).max(&cs.mul_i64(m));
    let [n1a, n1b] = k::THM12_N1.map(|s| c(s, prec));
    let n1 = (&n1a * cs).max(&(&n1b * cs.pow(&c("3.5", prec)) * h_sigma_p.pow(&c("2.5", prec))));
    let n3 = cs.mul_i64(k::THM12_N3);
    Ok(Theorem12 { composite, n1, n3 })
}

// Log and root branches shared by the two component corollaries.
fn component_shape(h_p: &Real, h_e: &Real, log_factor: i64, lead: i64, root_factor: i64) -> (Real, Real) {
    let prec = h_p.precision();
    let s = h_p.sqrt();
    let (m, a) = k::HEIGHT_MIX;
    let log_branch = int(log_factor, prec) / &s * (int(2, prec) / &s).ln();
    let root_branch = int(lead, prec) / &s + int(root_factor, prec) * (Real::one(prec) + (h_e.mul_i64(m) + int(a, prec)) / h_p).sqrt();
    (log_branch, root_branch)
}

/// n > max{(4/√ĥ)·log(2/√ĥ), 288/√ĥ + 4√(1 + (128h(E′) + 135)/ĥ)}.
pub fn bounded_component_bounds(h_p: &Real, h_e_prime: &Real) -> Result<BoundReport> {
    positive(h_p, "ĥ(P′)")?;
    let (lead, rf) = k::BOUNDED_COMPONENT;
    let (l, r) = component_shape(h_p, h_e_prime, 4, lead, rf);
    Ok(BoundReport::new("bounded_component", Meaning::IndexExceedingImpliesTwoNewPrimes, vec![("log", l), ("root", r)]))
}

/// Degree threshold: the square of max{(2/√ĥ)·log(2/√ĥ), 144/√ĥ + 2√(1 + (128h(E₀) + 135)/ĥ)}.
pub fn doubly_magnified_degree_bounds(h_p: &Real, h_e0: &Real) -> Result<BoundReport> {
    positive(h_p, "ĥ(P′)")?;
    let (lead, rf) = k::DOUBLY_MAGNIFIED;
    let (l, r) = component_shape(h_p, h_e0, 2, lead, rf);
    Ok(BoundReport::new("doubly_magnified", Meaning::UpperBoundOnIndex, vec![("log", l.powi(2)), ("root", r.powi(2))]))
}

/// ĥ_∞(P′) ≤ 7h(E′) + 8 + log deg(σ∘τ).
pub fn magnified_siegel_bound(h_e_prime: &Real, deg_st: u64) -> Result<Real> {
    if deg_st == 0 {
        return Err(Error::PreconditionViolated("degree must be positive".into()));
    }
    let prec = h_e_prime.precision();
    let (a, b) = k::MAGNIFIED_SIEGEL;
    Ok(h_e_prime.mul_i64(a) + int(b, prec) + int(deg_st as i64, prec).ln())
}

/// max{8, 2/ĥ(P′) + √(3 + max{5h(E′)/ĥ(P′), 9h(E)/ĥ(σP′)} + 7/ĥ(P′))}.
pub fn lll_gap_threshold(inp: &BoundInputs) -> Result<Real> {
    positive(&inp.h_p, "ĥ(P′)")?;
    positive(&inp.h_sigma_p, "ĥ(σ(P′))")?;
    let prec = inp.h_p.precision();
    let inner = (inp.h_e_prime.mul_i64(5) / &inp.h_p).max(&(inp.h_e.mul_i64(9) / &inp.h_sigma_p));
    let t = int(2, prec) / &inp.h_p + (int(3, prec) + inner + int(7, prec) / &inp.h_p).sqrt();
    Ok(t.max(&int(k::LLL_FLOOR, prec)))
}

#[derive(Clone, Debug)]
pub struct GapReport {
    pub case_a: Real,
    pub case_b: Real,
    pub threshold: Real,
    pub hypotheses_ok: bool,
    pub detail: Option<String>,
}

/// Bounds on the smallest of three pairwise coprime indices n₁ < n₂ < n₃
/// above the LLL threshold.
pub fn gap_principle(n: [u64; 3], inp: &BoundInputs) -> Result<GapReport> {
    use num_integer::Integer;
    let threshold = lll_gap_threshold(inp)?;
    let prec = inp.h_p.precision();
    let [n1, n2, n3] = n;
    let mut detail = None;
    if !(n1 < n2 && n2 < n3) {
        detail = Some("indices must satisfy n1 < n2 < n3".to_string());
    } else if n1.gcd(&n2) != 1 || n1.gcd(&n3) != 1 || n2.gcd(&n3) != 1 {
        detail = Some("indices are not pairwise coprime".to_string());
    } else if n1 <= 8 || int(n1 as i64, prec) <= threshold {
        detail = Some(format!("n1 = {n1} does not exceed the threshold {:?}", threshold));
    }
    let two = int(2, prec);
    let ln3 = int(n3 as i64, prec).ln();
    let case_a = &two / &inp.h_p
        + (&two + (ln3.mul_i64(2) + inp.h_e.mul_i64(k::GAP_HE_A)) / &inp.h_sigma_p + c(k::GAP_A, prec) / &inp.h_p).sqrt();
    let case_b = &two / &inp.h_p
        + (Real::one(prec) + (ln3 + inp.h_e_prime.mul_i64(k::GAP_HE_B) + c(k::GAP_B, prec)) / &inp.h_p).sqrt();
    Ok(GapReport { case_a, case_b, threshold, hypotheses_ok: detail.is_none(), detail })
}

/// The window 24h + 22.35 bounding min{h_∞(n_j Q) − log n_i, h_∞(n_i Q) − log n_j}.
pub fn gap_height_window(h: &Real) -> Real {
    h.mul_i64(24) + c(k::GAP_WINDOW, h.precision())
}

/// ĥ_∞(Q) ≤ h_∞(Q) + h(j)/12 + 1.07.
pub fn silverman_arch_difference(h_inf: &Real, h_j: &Real) -> Real {
    h_inf + h_j.div_i64(12) + c(k::SILVERMAN_ARCH, h_inf.precision())
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 192;

    fn r(s: &str) -> Real {
        Real::parse(s, P)
    }

    fn near(a: &Real, b: f64) -> bool {
        ((a.to_f64() - b) / b.abs().max(1.0)).abs() < 1e-12
    }

    #[test]
    fn n2_log_examples() {
        assert!(near(&solve_n2_log(&r("0"), &r("4"), 1, &r("1")), 2.0));
        let v = solve_n2_log(&r("0"), &r("0"), 2, &r("3"));
        let want = 3.0 * (4.0 * 4f64.ln() + 2.0 * 3f64.ln()).powi(2);
        assert!(near(&v, want));
    }

    #[test]
    fn siegel_examples() {
        let mut i = BoundInputs::new(P);
        i.h_p = r("1");
        i.h_e_prime = r("1");
        i.d = 2;
        let (b1, _) = siegel_bounds(&i).unwrap();
        assert!(near(&b1, 2.0 + 2f64.sqrt()));
        i.eps = r("0.5");
        assert!(matches!(siegel_bounds(&i), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn nonuniform_substitution() {
        let mut i = BoundInputs::new(P);
        for f in [&mut i.h_p, &mut i.h_sigma_p, &mut i.h_e, &mut i.h_e_prime] {
            *f = r("1");
        }
        let (a, b) = nonuniform_bounds(&i).unwrap();
        assert_eq!(a.value, r("2.1e30"));
        assert_eq!(b.value, r("4.2e30"));
    }

    #[test]
    fn szpiro_and_theorem12() {
        assert_eq!(szpiro_constant(&r("1")).to_decimal(10), "2.56e14");
        let t = theorem12_bounds(&r("1"), &r("1")).unwrap();
        assert_eq!(t.composite, r("490000"));
        assert_eq!(t.n3, r("77"));
        assert_eq!(t.n1, r("4.2e30"));
    }

    #[test]
    fn component_corollaries() {
        let b = bounded_component_bounds(&r("1"), &r("1")).unwrap();
        assert!(near(&b.value, 288.0 + 4.0 * 264f64.sqrt()));
        let h4 = bounded_component_bounds(&r("4"), &r("1")).unwrap();
        assert!(h4.branches[0].1.is_zero());
        let d = doubly_magnified_degree_bounds(&r("1"), &r("1")).unwrap();
        assert!(near(&d.value, (144.0 + 2.0 * 264f64.sqrt()).powi(2)));
    }

    #[test]
    fn lll_threshold_plateau() {
        let mut i = BoundInputs::new(P);
        for f in [&mut i.h_p, &mut i.h_sigma_p, &mut i.h_e, &mut i.h_e_prime] {
            *f = r("1");
        }
        assert_eq!(lll_gap_threshold(&i).unwrap(), r("8"));
        let g = gap_principle([9, 10, 11], &i).unwrap();
        assert!(g.hypotheses_ok);
        assert!(!gap_principle([9, 12, 15], &i).unwrap().hypotheses_ok);
    }

    #[test]
    fn magnified_siegel_identity_degree() {
        assert_eq!(magnified_siegel_bound(&r("1"), 1).unwrap(), r("15"));
    }
}
