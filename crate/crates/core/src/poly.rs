//! Dense univariate polynomials over ℚ, coefficients lowest degree first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{parse_rational, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Rational>,
}

fn parse_symbolic(s: &str) -> Option<Poly> {
    let s: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !s[..i].ends_with('^') {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut acc = Poly::zero();
    for t in terms {
        let (sign, body) = match t.as_bytes().first()? {
            b'-' => (-1, &t[1..]),
            b'+' => (1, &t[1..]),
            _ => (1, t),
        };
        let (coef, deg) = match body.find('x') {
            None => (parse_rational(body)?, 0usize),
            Some(k) => {
                let c = match &body[..k] {
                    "" => Rational::one(),
                    c => parse_rational(c)?,
                };
                let d = match &body[k + 1..] {
                    "" => 1,
                    r => r.strip_prefix('^')?.parse().ok()?,
                };
                (c, d)
            }
        };
        let mut c = vec![Rational::zero(); deg + 1];
        c[deg] = coef * Rational::from_integer(sign.into());
        acc = &acc + &Poly::new(c);
    }
    Some(acc)
}

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Poly {
        Poly::new(c.iter().map(|x| Rational::from_integer(x.clone())).collect())
    }

    pub fn zero() -> Poly {
        Poly { c: vec![] }
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn x() -> Poly {
        Poly::from_ints(&[0, 1])
    }

    pub fn constant(a: Rational) -> Poly {
        Poly::new(vec![a])
    }

    /// x - r
    pub fn linear_root(r: &Rational) -> Poly {
        Poly::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.c.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports -1.
    pub fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn lead(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|a| a.is_integer())
    }

    pub fn int_coeffs(&self) -> Option<Vec<BigInt>> {
        self.c.iter().map(|a| a.is_integer().then(|| a.to_integer())).collect()
    }

    pub fn scale(&self, a: &Rational) -> Poly {
        Poly::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&(Rational::one() / self.lead()))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn eval_poly(&self, x: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * x) + &Poly::constant(a.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut r = Poly::one();
        let mut b = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                r = &r * &b;
            }
            n >>= 1;
            if n > 0 {
                b = &b * &b;
            }
        }
        r
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.c.clone();
        let dd = d.degree() as usize;
        if self.degree() < d.degree() {
            return (Poly::zero(), self.clone());
        }
        let inv = Rational::one() / d.lead();
        let mut q = vec![Rational::zero(); self.c.len() - dd];
        for i in (0..q.len()).rev() {
            let t = &r[i + dd] * &inv;
            if t.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                r[i + j] -= &t * b;
            }
            q[i] = t;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Exact quotient, if `d` divides `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> Poly {
        if self.degree() <= 0 {
            return Poly::one();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Inverse of `self` modulo `m`, if they are coprime.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        if m.degree() <= 0 {
            return Some(Poly::zero());
        }
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.degree() != 0 {
            return None;
        }
        Some(s0.scale(&(Rational::one() / r0.lead())).rem(m))
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() <= 0
    }

    /// Evaluates the homogenization of degree `deg` at (a, b): b^deg · f(a/b).
    pub fn hom_eval(&self, deg: usize, a: &Rational, b: &Rational) -> Rational {
        assert!(self.degree() <= deg as isize);
        let mut acc = Rational::zero();
        let mut bp = Rational::one();
        let mut terms = vec![Rational::zero(); deg + 1];
        for (i, t) in terms.iter_mut().enumerate() {
            *t = self.coeff(i);
        }
        // Horner in a with b powers accumulated from the top degree down.
        for t in terms.iter().rev() {
            acc = acc * a + t * &bp;
            bp *= b;
        }
        acc
    }

    /// Homogenized substitution: B^deg · f(A/B) for polynomials A, B.
    pub fn hom_compose(&self, deg: usize, a: &Poly, b: &Poly) -> Poly {
        assert!(self.degree() <= deg as isize);
        let mut acc = Poly::zero();
        let mut bp = Poly::one();
        for i in (0..=deg).rev() {
            acc = &(&acc * a) + &bp.scale(&self.coeff(i));
            if i > 0 {
                bp = &bp * b;
            }
        }
        acc
    }

    /// Polynomial square root, if `self` is the square of a polynomial over ℚ.
    pub fn sqrt(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let d = self.degree();
        if d % 2 != 0 {
            return None;
        }
        let lead = crate::arith::exact_sqrt_rat(&self.lead())?;
        let m = (d / 2) as usize;
        let mut g = vec![Rational::zero(); m + 1];
        g[m] = lead.clone();
        let two_lead = &lead + &lead;
        for k in (0..m).rev() {
            // coefficient of x^(m+k) in g²
            let mut s = self.coeff(m + k);
            for i in k + 1..m {
                let j = m + k - i;
                if j > i && j <= m {
                    s -= &g[i] * &g[j] * Rational::from_integer(2.into());
                } else if j == i {
                    s -= &g[i] * &g[i];
                }
            }
            g[k] = s / &two_lead;
        }
        let g = Poly::new(g);
        (&g * &g == *self).then_some(g)
    }

    /// Characteristic polynomial of multiplication by `a` in ℚ[x]/(m).
    pub fn charpoly_mod(a: &Poly, m: &Poly) -> Poly {
        let n = m.degree() as usize;
        let mut mat = vec![vec![Rational::zero(); n]; n];
        let mut cur = a.rem(m);
        let x = Poly::x();
        // column j holds a·x^j mod m
        for col in 0..n {
            for (row, r) in mat.iter_mut().enumerate() {
                r[col] = cur.coeff(row);
            }
            cur = (&cur * &x).rem(m);
        }
        faddeev_leverrier(&mat)
    }

    /// Content-free integer primitive part with positive leading coefficient.
    pub fn primitive_integer(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut l = BigInt::one();
        for a in &self.c {
            l = l.lcm(a.denom());
        }
        let ints: Vec<BigInt> = self.c.iter().map(|a| (a * Rational::from_integer(l.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for a in &ints {
            g = g.gcd(a);
        }
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        Poly::from_bigints(&ints.iter().map(|a| a / &g).collect::<Vec<_>>())
    }

    /// Coefficient list `c0,c1,...` (ascending) or an expression in x such as `x^2-3x+5/2`.
    pub fn parse(s: &str) -> Option<Poly> {
        let s = s.trim();
        if s.is_empty() {
            return None;
        }
        if s.contains('x') {
            return parse_symbolic(s);
        }
        let c: Option<Vec<Rational>> = s.split(',').map(parse_rational).collect();
        Some(Poly::new(c?))
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.c.iter().map(crate::arith::fmt_rational).collect::<Vec<_>>().join(",")
    }
}

fn faddeev_leverrier(a: &[Vec<Rational>]) -> Poly {
    let n = a.len();
    let matmul = |x: &[Vec<Rational>], y: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
        let mut r = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                if x[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    r[i][j] += &x[i][k] * &y[k][j];
                }
            }
        }
        r
    };
    // c_n = 1; M_k = A M_{k-1} + c_{n-k+1} I; c_{n-k} = -tr(A M_k)/k
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        let mut am = matmul(a, &m);
        for (i, row) in am.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = am;
        let amk = matmul(a, &m);
        let tr: Rational = (0..n).map(|i| amk[i][i].clone()).sum();
        coeffs[n - k] = -tr / Rational::from_integer(BigInt::from(k));
    }
    Poly::new(coeffs)
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]", self.to_text())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut r = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        Poly::new(r)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.c.iter().map(|a| -a).collect())
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn parse_both_notations() {
        assert_eq!(Poly::parse("x"), Some(Poly::x()));
        assert_eq!(Poly::parse("x^2 - 3x + 5/2"), Some(Poly::new(vec![rat(5, 2), rat(-3, 1), rat(1, 1)])));
        assert_eq!(Poly::parse("-2*x^3+x"), Poly::parse("0,1,0,-2"));
        assert_eq!(Poly::parse("x-0.5"), None);
    }

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_ints(&[-1, 0, 1]); // x² - 1
        let b = Poly::from_ints(&[-1, 1]);
        assert_eq!(a.div_exact(&b), Some(Poly::from_ints(&[1, 1])));
        let c = Poly::from_ints(&[1, 2, 1]);
        assert_eq!(a.gcd(&c), Poly::from_ints(&[1, 1]));
    }

    #[test]
    fn radical_drops_multiplicity() {
        let p = Poly::from_ints(&[1, 1]).pow(3) * Poly::from_ints(&[0, 1]);
        assert_eq!(p.radical(), Poly::from_ints(&[0, 1, 1]));
    }

    #[test]
    fn square_root() {
        let g = Poly::from_ints(&[3, -2, 5]);
        assert_eq!((&g * &g).sqrt(), Some(g));
        assert_eq!(Poly::from_ints(&[1, 0, 2]).sqrt(), None);
    }

    #[test]
    fn homogenization() {
        let f = Poly::from_ints(&[1, 2, 3]);
        // b³ f(a/b) at a=2, b=5 with deg 3
        let v = f.hom_eval(3, &rat(2, 1), &rat(5, 1));
        assert_eq!(v, rat(125 + 2 * 2 * 25 + 3 * 4 * 5, 1));
        let hp = f.hom_compose(3, &Poly::constant(rat(2, 1)), &Poly::constant(rat(5, 1)));
        assert_eq!(hp.coeff(0), v);
    }

    #[test]
    fn charpoly_of_root_map() {
        // In ℚ[x]/(x² - 2), multiplication by x has charpoly t² - 2.
        let m = Poly::from_ints(&[-2, 0, 1]);
        assert_eq!(Poly::charpoly_mod(&Poly::x(), &m), m);
    }

    #[test]
    fn text_roundtrip() {
        let p = Poly::parse("0,1,-1/2").unwrap();
        assert_eq!(p.to_text(), "0,1,-1/2");
    }
}
