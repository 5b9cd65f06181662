//! Division polynomials of the multiplication maps.
//!
//! Internally ψ_n is kept in reduced form ĝ_n ∈ ℤ[x], with ψ_n = ĝ_n for odd n
//! and ψ_n = ψ_2·ĝ_n for even n, where ψ_2² = f2 = 4x³ + b2x² + 2b4x + b6.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{rat_int, Rational};
use crate::curve::{Curve, Point};
use crate::poly::Poly;

#[derive(Clone, Debug)]
pub struct DivisionPolynomials {
    f2: Poly,
    g: Vec<Poly>,
}

impl DivisionPolynomials {
    pub fn new(e: &Curve) -> DivisionPolynomials {
        let (b2, b4, b6, b8) = (e.b2().clone(), e.b4().clone(), e.b6().clone(), e.b8().clone());
        let i = BigInt::from;
        let g3 = Poly::from_bigints(&[b8.clone(), i(3) * &b6, i(3) * &b4, b2.clone(), i(3)]);
        let g4 = Poly::from_bigints(&[
            &b4 * &b8 - &b6 * &b6,
            &b2 * &b8 - &b4 * &b6,
            i(10) * &b8,
            i(10) * &b6,
            i(5) * &b4,
            b2.clone(),
            i(2),
        ]);
        DivisionPolynomials { f2: e.two_torsion_poly(), g: vec![Poly::zero(), Poly::one(), Poly::one(), g3, g4] }
    }

    pub fn f2(&self) -> &Poly {
        &self.f2
    }

    fn extend_to(&mut self, n: usize) {
        while self.g.len() <= n {
            let k = self.g.len();
            let m = k / 2;
            let g = &self.g;
            let next = if k % 2 == 1 {
                let a = &g[m + 2] * &g[m].pow(3);
                let b = &g[m - 1] * &g[m + 1].pow(3);
                let f4 = self.f2.pow(2);
                if m.is_multiple_of(2) {
                    &(&f4 * &a) - &b
                } else {
                    &a - &(&f4 * &b)
                }
            } else {
                let t = &(&g[m + 2] * &g[m - 1].pow(2)) - &(&g[m - 2] * &g[m + 1].pow(2));
                &g[m] * &t
            };
            self.g.push(next);
        }
    }

    /// ĝ_n: ψ_n for odd n, ψ_n/ψ_2 for even n.
    pub fn reduced(&mut self, n: usize) -> Poly {
        self.extend_to(n + 1);
        self.g[n].clone()
    }

    /// ψ_n² as a polynomial in x, of degree n² − 1.
    pub fn psi_sq(&mut self, n: usize) -> Poly {
        let g = self.reduced(n);
        let s = &g * &g;
        if n.is_multiple_of(2) {
            &s * &self.f2
        } else {
            s
        }
    }

    /// φ_n = x·ψ_n² − ψ_{n+1}ψ_{n−1}, monic of degree n².
    pub fn phi(&mut self, n: usize) -> Poly {
        if n == 0 {
            return Poly::one();
        }
        self.extend_to(n + 1);
        let sq = {
            let g = &self.g[n];
            g * g
        };
        let cross = &self.g[n + 1] * &self.g[n - 1];
        if n.is_multiple_of(2) {
            &(&Poly::x() * &(&sq * &self.f2)) - &cross
        } else {
            &(&Poly::x() * &sq) - &(&cross * &self.f2)
        }
    }
}

pub fn psi_sq(e: &Curve, n: usize) -> Poly {
    DivisionPolynomials::new(e).psi_sq(n)
}

pub fn phi(e: &Curve, n: usize) -> Poly {
    DivisionPolynomials::new(e).phi(n)
}

/// Evaluates ψ_n at an affine point by the value-level recurrence, touching
/// only O(log n) indices.
pub struct PsiValues {
    x: Rational,
    psi2: Rational,
    base: [Rational; 5],
    memo: BTreeMap<u64, Rational>,
}

impl PsiValues {
    pub fn new(e: &Curve, p: &Point) -> Option<PsiValues> {
        let (x, y) = match p {
            Point::Infinity => return None,
            Point::Affine { x, y } => (x.clone(), y.clone()),
        };
        let mut dp = DivisionPolynomials::new(e);
        let psi2 = Rational::from_integer(BigInt::from(2)) * &y + rat_int(e.a1().clone()) * &x + rat_int(e.a3().clone());
        let g3 = dp.reduced(3).eval(&x);
        let g4 = dp.reduced(4).eval(&x);
        let base = [Rational::zero(), Rational::one(), psi2.clone(), g3, &psi2 * g4];
        Some(PsiValues { x, psi2, base, memo: BTreeMap::new() })
    }

    pub fn psi(&mut self, n: u64) -> Rational {
        if n <= 4 {
            return self.base[n as usize].clone();
        }
        if let Some(v) = self.memo.get(&n) {
            return v.clone();
        }
        let m = n / 2;
        let v = if n % 2 == 1 {
            let a = self.psi(m + 2) * self.psi(m).pow(3);
            let b = self.psi(m - 1) * self.psi(m + 1).pow(3);
            a - b
        } else if self.psi2.is_zero() {
            Rational::zero()
        } else {
            let t = self.psi(m + 2) * self.psi(m - 1).pow(2) - self.psi(m - 2) * self.psi(m + 1).pow(2);
            self.psi(m) * t / &self.psi2
        };
        self.memo.insert(n, v.clone());
        v
    }

    pub fn phi(&mut self, n: u64) -> Rational {
        if n == 0 {
            return Rational::one();
        }
        let p = self.psi(n);
        &self.x * &p * &p - self.psi(n + 1) * self.psi(n - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn e37() -> Curve {
        Curve::from_ints([0, 0, 1, -1, 0]).unwrap()
    }

    #[test]
    fn degrees_and_leading_terms() {
        let mut dp = DivisionPolynomials::new(&e37());
        for n in 1..=9usize {
            let s = dp.psi_sq(n);
            assert_eq!(s.degree(), (n * n - 1) as isize);
            assert_eq!(s.lead(), rat((n * n) as i64, 1));
            assert!(s.is_integral());
            let f = dp.phi(n);
            assert_eq!(f.degree(), (n * n) as isize);
            assert_eq!(f.lead(), rat(1, 1));
        }
        assert_eq!(dp.psi_sq(1), Poly::one());
    }

    #[test]
    fn x_of_multiples() {
        let e = Curve::from_ints([1, -1, 1, 2, 21]).unwrap();
        let p = Point::from_ints(3, 5);
        assert!(e.contains(&p));
        let mut dp = DivisionPolynomials::new(&e);
        let x = p.x().unwrap().clone();
        for n in 1..=8usize {
            let q = e.mul(n as i64, &p).unwrap();
            let lhs = q.x().unwrap() * dp.psi_sq(n).eval(&x);
            assert_eq!(lhs, dp.phi(n).eval(&x), "n = {n}");
        }
    }

    #[test]
    fn value_recurrence_matches_polynomials() {
        let e = e37();
        let p = Point::from_ints(0, 0);
        let mut dp = DivisionPolynomials::new(&e);
        let mut pv = PsiValues::new(&e, &p).unwrap();
        let x = rat(0, 1);
        for n in 1..=10u64 {
            let v = pv.psi(n);
            assert_eq!(&v * &v, dp.psi_sq(n as usize).eval(&x));
            assert_eq!(pv.phi(n), dp.phi(n as usize).eval(&x));
        }
    }
}
