//! Rational isogenies given by kernel polynomials (Vélu), their x-maps
//! φ_σ/ψ_σ², composition by the chain rule, duals and pull-backs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{rat_int, rat_mod, Rational};
use crate::curve::{isomorphism, Curve, Iso, Point, RatModel};
use crate::divpoly::DivisionPolynomials;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::tate::minimal_model_rat;

/// σ: domain → codomain with x(σ(P)) = φ_σ(x)/ψ_σ²(x) and σ*ω = d_σ·ω.
#[derive(Clone, Debug, PartialEq)]
pub struct Isogeny {
    pub domain: Curve,
    pub codomain: Curve,
    pub degree: u64,
    /// Monic, one linear factor per x-coordinate of a nonzero kernel point.
    pub kernel: Poly,
    pub d_sigma: BigInt,
    pub psi_sq: Poly,
    pub phi: Poly,
}

// Vélu's model and x-map before normalisation to a minimal model.
struct Raw {
    model: RatModel,
    phi: Poly,
    den: Poly,
    degree: u64,
    kernel: Poly,
}

fn trace(h: &Poly, k: &Poly) -> Rational {
    let n = k.degree();
    if n <= 0 {
        return Rational::zero();
    }
    (h * &k.derivative()).rem(k).coeff(n as usize - 1)
}

fn velu_raw(e: &Curve, kernel: &Poly) -> Result<Raw> {
    if kernel.is_zero() {
        return Err(Error::InvalidKernel("zero polynomial".into()));
    }
    let k = kernel.radical();
    let f2 = e.two_torsion_poly();
    let k2 = k.gcd(&f2);
    let ko = k.div_exact(&k2).expect("gcd divides");
    let degree = 1 + k2.degree() as u64 + 2 * ko.degree() as u64;

    if degree > 1 && degree <= 12 {
        let full = DivisionPolynomials::new(e).psi_sq(degree as usize);
        if full.rem(&k).degree() >= 0 {
            return Err(Error::InvalidKernel(format!("roots are not {degree}-torsion")));
        }
    }

    let [a1, a2, a3, a4, a6] = e.a().clone().map(Rational::from_integer);
    let (b2, b4) = (rat_int(e.b2().clone()), rat_int(e.b4().clone()));
    let r = |n: i64| Rational::from_integer(n.into());
    let go = Poly::new(vec![b4.clone(), b2.clone(), r(6)]);
    let g2 = go.scale(&crate::arith::rat(1, 2));
    let x = Poly::x();

    let v = trace(&g2, &k2) + trace(&go, &ko);
    let w = trace(&(&x * &g2), &k2) + trace(&(&f2 + &(&x * &go)), &ko);
    let model = RatModel { a: [a1, a2, a3, &a4 - r(5) * &v, &a6 - &b2 * &v - r(7) * &w] };

    let n2 = (&g2 * &k2.derivative()).rem(&k2);
    let no = (&go * &ko.derivative()).rem(&ko);
    let nu = (&f2 * &ko.derivative()).rem(&ko);
    let ko2 = &ko * &ko;
    let den = &k2 * &ko2;
    let phi = &(&(&x * &den) + &(&n2 * &ko2)) + &(&(&no * &(&k2 * &ko)) + &(&k2 * &(&(&nu * &ko.derivative()) - &(&nu.derivative() * &ko))));

    if !model.invariants().disc.is_zero() && phi.gcd(&den).degree() == 0 && lifts_to_morphism(&model, &phi, &den, &f2) {
        Ok(Raw { model, phi, den, degree, kernel: k })
    } else {
        Err(Error::InvalidKernel("x-coordinates do not form a subgroup".into()))
    }
}

// Ψ·(4φ³ + B2φ²Ψ + 2B4φΨ² + B6Ψ³) = (φ'Ψ − φΨ')²·f2, i.e. the x-map extends
// to a morphism that pulls the invariant differential back to itself.
fn lifts_to_morphism(model: &RatModel, phi: &Poly, den: &Poly, f2: &Poly) -> bool {
    let inv = model.invariants();
    let f = Poly::new(vec![inv.b6, &inv.b4 + &inv.b4, inv.b2, Rational::from_integer(4.into())]);
    let lhs = den * &f.hom_compose(3, phi, den);
    let wr = &(&phi.derivative() * den) - &(phi * &den.derivative());
    lhs == &(&wr * &wr) * f2
}

fn finish(e: &Curve, raw: Raw, codomain: Curve, iso: &Iso) -> Result<Isogeny> {
    let u2 = &iso.u * &iso.u;
    let psi_sq = raw.den.scale(&u2);
    let phi = &raw.phi - &raw.den.scale(&iso.r);
    if !iso.u.is_integer() || !psi_sq.is_integral() || !phi.is_integral() {
        return Err(Error::PreconditionViolated("target is not a minimal model of the Vélu codomain".into()));
    }
    let d_sigma = iso.u.to_integer().abs();
    Ok(Isogeny { domain: e.clone(), codomain, degree: raw.degree, kernel: raw.kernel, d_sigma, psi_sq, phi })
}

impl Isogeny {
    pub fn identity(e: &Curve) -> Isogeny {
        Isogeny {
            domain: e.clone(),
            codomain: e.clone(),
            degree: 1,
            kernel: Poly::one(),
            d_sigma: BigInt::one(),
            psi_sq: Poly::one(),
            phi: Poly::x(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.degree == 1 && self.domain == self.codomain && self.phi == Poly::x()
    }

    /// [m] on `e`, with ψ_m², φ_m and d = m.
    pub fn multiplication(e: &Curve, m: u64) -> Result<Isogeny> {
        if m == 0 {
            return Err(Error::PreconditionViolated("m must be positive".into()));
        }
        if m == 1 {
            return Ok(Isogeny::identity(e));
        }
        let mut dp = DivisionPolynomials::new(e);
        let psi_sq = dp.psi_sq(m as usize);
        Ok(Isogeny {
            domain: e.clone(),
            codomain: e.clone(),
            degree: m * m,
            kernel: psi_sq.radical(),
            d_sigma: BigInt::from(m),
            phi: dp.phi(m as usize),
            psi_sq,
        })
    }

    /// Isogeny with the given kernel polynomial onto a standardized minimal model.
    pub fn velu(e: &Curve, kernel: &Poly) -> Result<Isogeny> {
        if kernel.degree() == 0 {
            return Ok(Isogeny::identity(e));
        }
        let raw = velu_raw(e, kernel)?;
        let mm = minimal_model_rat(&raw.model).map_err(|err| match err {
            Error::SingularCurve => Error::InvalidKernel("singular codomain".into()),
            other => other,
        })?;
        finish(e, raw, mm.curve, &mm.iso)
    }

    /// As `velu`, landing on the given model of the codomain.
    pub fn velu_to(e: &Curve, kernel: &Poly, target: &Curve) -> Result<Isogeny> {
        if kernel.degree() == 0 && e == target {
            return Ok(Isogeny::identity(e));
        }
        let raw = velu_raw(e, kernel)?;
        let iso = isomorphism(&raw.model, &target.rat_model())
            .ok_or_else(|| Error::DomainMismatch("Vélu codomain is not isomorphic to the target".into()))?;
        finish(e, raw, target.clone(), &iso)
    }

    /// x(σ(P)) for a point with x-coordinate `x`; `None` if P is in the kernel.
    pub fn x_map(&self, x: &Rational) -> Option<Rational> {
        let d = self.psi_sq.eval(x);
        (!d.is_zero()).then(|| self.phi.eval(x) / d)
    }

    /// σ(P), with the y-coordinate fixed by σ*ω = d_σ·ω.
    pub fn image(&self, p: &Point) -> Result<Point> {
        self.domain.check(p)?;
        let (x, y) = match p {
            Point::Infinity => return Ok(Point::Infinity),
            Point::Affine { x, y } => (x, y),
        };
        let den = self.psi_sq.eval(x);
        if den.is_zero() {
            return Ok(Point::Infinity);
        }
        let num = self.phi.eval(x);
        let xx = &num / &den;
        let dx = (self.phi.derivative().eval(x) * &den - &num * self.psi_sq.derivative().eval(x)) / (&den * &den);
        let e = &self.domain;
        let c = &self.codomain;
        let two = Rational::from_integer(2.into());
        let w = &two * y + rat_int(e.a1().clone()) * x + rat_int(e.a3().clone());
        let yy = (dx * w / rat_int(self.d_sigma.clone()) - rat_int(c.a1().clone()) * &xx - rat_int(c.a3().clone())) / two;
        let q = Point::new(xx, yy);
        self.codomain.check(&q)?;
        Ok(q)
    }

    /// The dual isogeny, landing exactly on `self.domain`.
    pub fn dual(&self) -> Result<Isogeny> {
        if self.degree == 1 {
            let iso = isomorphism(&self.codomain.rat_model(), &self.domain.rat_model()).expect("degree one");
            let raw = Raw {
                model: self.codomain.rat_model(),
                phi: Poly::x(),
                den: Poly::one(),
                degree: 1,
                kernel: Poly::one(),
            };
            return finish(&self.codomain, raw, self.domain.clone(), &iso);
        }
        let d = self.degree as usize;
        let torsion = DivisionPolynomials::new(&self.domain).psi_sq(d).radical();
        let rest = torsion.div_exact(&torsion.gcd(&self.kernel)).expect("gcd divides");
        let inv = self.psi_sq.inv_mod(&rest).ok_or_else(|| Error::InvalidKernel("kernel meets the image torsion".into()))?;
        let images = (&self.phi * &inv).rem(&rest);
        let kernel = Poly::charpoly_mod(&images, &rest).radical();
        Isogeny::velu_to(&self.codomain, &kernel, &self.domain)
    }
}

/// τ∘σ by the chain rule: φ_{τσ} = ψ_σ^{2 deg τ}·(φ_τ∘σ) and
/// ψ²_{τσ} = ψ_σ^{2 deg τ}·(ψ_τ²∘σ).
pub fn compose(sigma: &Isogeny, tau: &Isogeny) -> Result<Isogeny> {
    if sigma.codomain != tau.domain {
        return Err(Error::DomainMismatch("codomain of σ differs from domain of τ".into()));
    }
    let dt = tau.degree as usize;
    let phi = tau.phi.hom_compose(dt, &sigma.phi, &sigma.psi_sq);
    let psi_sq = &sigma.psi_sq * &tau.psi_sq.hom_compose(dt - 1, &sigma.phi, &sigma.psi_sq);
    Ok(Isogeny {
        domain: sigma.domain.clone(),
        codomain: tau.codomain.clone(),
        degree: sigma.degree * tau.degree,
        kernel: psi_sq.radical(),
        d_sigma: &sigma.d_sigma * &tau.d_sigma,
        psi_sq,
        phi,
    })
}

/// Checks both chain-rule identities against an independent Vélu
/// construction of τ∘σ from its kernel.
pub fn compose_check(sigma: &Isogeny, tau: &Isogeny) -> Result<bool> {
    let chain = compose(sigma, tau)?;
    let direct = Isogeny::velu_to(&sigma.domain, &chain.kernel, &tau.codomain)?;
    Ok(direct.phi == chain.phi && direct.psi_sq == chain.psi_sq && direct.degree == chain.degree)
}

/// τ_σ on the domain of σ, with kernel σ̂(ker τ), for τ on the codomain of σ.
pub fn pullback_kernel(sigma: &Isogeny, tau: &Isogeny) -> Result<Isogeny> {
    if sigma.degree.gcd(&tau.degree) != 1 {
        return Err(Error::NonCoprimeDegrees);
    }
    if tau.degree == 1 {
        return Ok(Isogeny::identity(&sigma.domain));
    }
    let chain = compose(sigma, tau)?;
    let torsion = DivisionPolynomials::new(&sigma.domain).psi_sq(tau.degree as usize).radical();
    Isogeny::velu(&sigma.domain, &chain.kernel.gcd(&torsion))
}

/// ψ_σ²·ψ_{τ_σ}² divides ψ_{τ∘σ}² in ℤ[x].
pub fn pullback_divides(sigma: &Isogeny, tau: &Isogeny, tau_sigma: &Isogeny) -> Result<bool> {
    let chain = compose(sigma, tau)?;
    let prod = &sigma.psi_sq * &tau_sigma.psi_sq;
    Ok(chain.psi_sq.div_exact(&prod).is_some_and(|q| q.is_integral()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reduction {
    Singular,
    Nonsingular,
}

/// Whether P reduces to the singular point of E mod p.
pub fn ayad_criterion(e: &Curve, p: &Point, prime: &BigInt) -> Result<Reduction> {
    e.check(p)?;
    let (x, y) = match p {
        Point::Infinity => return Err(Error::IdentityPoint),
        Point::Affine { x, y } => (x, y),
    };
    if x.denom().is_multiple_of(prime) {
        return Err(Error::ReducesToIdentity(prime.to_string()));
    }
    if !e.disc().is_multiple_of(prime) {
        return Ok(Reduction::Nonsingular);
    }
    let (xr, yr) = (rat_mod(x, prime), rat_mod(y, prime));
    let [a1, a2, a3, a4, _] = e.a().clone();
    let fy = BigInt::from(2) * &yr + &a1 * &xr + &a3;
    let fx = &a1 * &yr - BigInt::from(3) * &xr * &xr - BigInt::from(2) * &a2 * &xr - &a4;
    if fy.is_multiple_of(prime) && fx.is_multiple_of(prime) {
        Ok(Reduction::Singular)
    } else {
        Ok(Reduction::Nonsingular)
    }
}

/// Parses an isogeny spec `mult:m` or `kernel:<poly>`.
pub fn from_spec(e: &Curve, spec: &str) -> Result<Isogeny> {
    if let Some(m) = spec.strip_prefix("mult:") {
        let m: u64 = m.trim().parse().map_err(|_| Error::Parse(format!("bad multiplier {m:?}")))?;
        return Isogeny::multiplication(e, m);
    }
    if let Some(k) = spec.strip_prefix("kernel:") {
        return Isogeny::velu(e, &parse_kernel(k)?);
    }
    Err(Error::Parse(format!("isogeny spec must be mult:m or kernel:<poly>, got {spec:?}")))
}

pub fn parse_kernel(s: &str) -> Result<Poly> {
    if let Some(p) = Poly::parse(s) {
        return Ok(p.monic());
    }
    // Decimal or symbolic coefficients are not exact rationals.
    if s.split(',').all(|t| t.trim().parse::<f64>().is_ok() || t.chars().any(|c| c.is_alphabetic())) {
        return Err(Error::NonRationalKernel);
    }
    Err(Error::Parse(format!("bad kernel polynomial {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::divpoly::{phi, psi_sq};

    #[test]
    fn two_isogeny_of_e25() {
        let e = Curve::ea(25);
        let s = Isogeny::velu(&e, &Poly::x()).unwrap();
        assert_eq!(s.degree, 2);
        assert_eq!(s.codomain.a(), Curve::from_ints([0, 0, 0, 100, 0]).unwrap().a());
        assert_eq!(s.phi, Poly::from_ints(&[-25, 0, 1]));
        assert_eq!(s.psi_sq, Poly::from_ints(&[0, 1]));
        assert_eq!(s.d_sigma, BigInt::one());
        let p = Point::from_ints(-4, 6);
        let q = s.image(&p).unwrap();
        assert_eq!(q.x(), Some(&rat(9, 4)));
    }

    #[test]
    fn velu_reproduces_multiplication() {
        let e = Curve::from_ints([0, 0, 1, -1, 0]).unwrap();
        for m in 2..=3u64 {
            let k = psi_sq(&e, m as usize).monic();
            let s = Isogeny::velu_to(&e, &k, &e).unwrap();
            assert_eq!(s.degree, m * m);
            assert_eq!(s.phi, phi(&e, m as usize));
            assert_eq!(s.psi_sq, psi_sq(&e, m as usize));
            assert_eq!(s.d_sigma, BigInt::from(m));
        }
    }

    #[test]
    fn images_follow_group_law() {
        let e = Curve::from_ints([1, -1, 1, 2, 21]).unwrap();
        let p = Point::from_ints(3, 5);
        for m in 2..=4u64 {
            let s = Isogeny::multiplication(&e, m).unwrap();
            assert_eq!(s.image(&p).unwrap(), e.mul(m as i64, &p).unwrap());
        }
    }

    #[test]
    fn rejects_non_subgroup() {
        let e = Curve::ea(25);
        assert!(matches!(Isogeny::velu(&e, &Poly::from_ints(&[-1, 1])), Err(Error::InvalidKernel(_))));
        assert!(matches!(Isogeny::velu(&e, &Poly::from_ints(&[-7, 0, 1])), Err(Error::InvalidKernel(_))));
        assert_eq!(parse_kernel("0.5,1"), Err(Error::NonRationalKernel));
    }

    #[test]
    fn dual_composes_to_multiplication() {
        let e = Curve::ea(25);
        let s = Isogeny::velu(&e, &Poly::x()).unwrap();
        let d = s.dual().unwrap();
        assert_eq!(d.codomain, e);
        assert_eq!(&s.d_sigma * &d.d_sigma, BigInt::from(2));
        let c = compose(&s, &d).unwrap();
        assert_eq!(c.psi_sq, psi_sq(&e, 2));
        assert_eq!(c.phi, phi(&e, 2));
        assert!(compose_check(&s, &d).unwrap());
    }

    #[test]
    fn chain_rule_for_multiplications() {
        let e = Curve::from_ints([0, 0, 1, -1, 0]).unwrap();
        let two = Isogeny::multiplication(&e, 2).unwrap();
        let three = Isogeny::multiplication(&e, 3).unwrap();
        let c = compose(&two, &three).unwrap();
        assert_eq!(c.psi_sq, psi_sq(&e, 6));
        assert_eq!(c.phi, phi(&e, 6));
        assert!(compose_check(&two, &three).unwrap());
        assert!(compose_check(&Isogeny::identity(&e), &two).unwrap());
    }

    #[test]
    fn pullback_of_three() {
        let e = Curve::ea(25);
        let s = Isogeny::velu(&e, &Poly::x()).unwrap();
        let t = Isogeny::multiplication(&s.codomain, 3).unwrap();
        let ts = pullback_kernel(&s, &t).unwrap();
        assert_eq!(ts.degree, 9);
        assert!(pullback_divides(&s, &t, &ts).unwrap());
        let id = Isogeny::identity(&s.codomain);
        assert!(pullback_kernel(&s, &id).unwrap().is_identity());
        let two = Isogeny::multiplication(&s.codomain, 2).unwrap();
        assert_eq!(pullback_kernel(&s, &two), Err(Error::NonCoprimeDegrees));
    }

    #[test]
    fn ayad_on_ea() {
        let e = Curve::ea(25);
        // (5, 0) is 2-torsion sitting on the cusp mod 5.
        let p = Point::from_ints(5, 0);
        assert_eq!(ayad_criterion(&e, &p, &BigInt::from(5)).unwrap(), Reduction::Singular);
        assert_eq!(ayad_criterion(&e, &Point::from_ints(-4, 6), &BigInt::from(5)).unwrap(), Reduction::Nonsingular);
        assert_eq!(ayad_criterion(&e, &Point::from_ints(-4, 6), &BigInt::from(7)).unwrap(), Reduction::Nonsingular);
    }
}
