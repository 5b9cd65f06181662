//! Curves, points and isogenies used by the self-test and the test suites.
//!
//! Heights below are in the normalization used throughout the crate, half the
//! value PARI's `ellheight` reports.

use crate::curve::{Curve, Point};
use crate::error::Result;
use crate::isogeny::{from_spec, Isogeny};

#[derive(Clone, Debug)]
pub struct PointFixture {
    pub name: &'static str,
    pub curve: [i64; 5],
    pub point: (i64, i64),
}

impl PointFixture {
    pub fn curve(&self) -> Curve {
        Curve::from_ints(self.curve).expect("fixture curve is nonsingular")
    }

    pub fn point(&self) -> Point {
        Point::from_ints(self.point.0, self.point.1)
    }
}

/// Non-torsion points on minimal standardized models.
pub const POINTS: &[PointFixture] = &[
    // ĥ = 0.0255557
    PointFixture { name: "37a", curve: [0, 0, 1, -1, 0], point: (0, 0) },
    PointFixture { name: "389a-1", curve: [0, 1, 1, -2, 0], point: (0, 0) },
    PointFixture { name: "389a-2", curve: [0, 1, 1, -2, 0], point: (1, 0) },
    PointFixture { name: "43a", curve: [0, 1, 1, 0, 0], point: (0, 0) },
    PointFixture { name: "53a", curve: [1, -1, 1, 0, 0], point: (0, 0) },
    PointFixture { name: "57a", curve: [0, -1, 1, -2, 2], point: (2, 1) },
    PointFixture { name: "5077a", curve: [0, 0, 1, -7, 6], point: (0, 2) },
    PointFixture { name: "mordell-2", curve: [0, 0, 0, 0, -2], point: (3, 5) },
    PointFixture { name: "c1-1-1-2-21", curve: [1, -1, 1, 2, 21], point: (3, 5) },
    PointFixture { name: "E25", curve: [0, 0, 0, -25, 0], point: (-4, 6) },
    PointFixture { name: "E2", curve: [0, 0, 0, -2, 0], point: (2, 2) },
    PointFixture { name: "E12", curve: [0, 0, 0, -12, 0], point: (-3, 3) },
    PointFixture { name: "E60", curve: [0, 0, 0, -60, 0], point: (-6, 12) },
];

pub fn point_fixture(name: &str) -> Option<&'static PointFixture> {
    POINTS.iter().find(|f| f.name == name)
}

#[derive(Clone, Debug)]
pub struct IsogenyFixture {
    pub name: &'static str,
    pub point: &'static str,
    /// `mult:m` or `kernel:<polynomial>`, as accepted by `isogeny::from_spec`.
    pub spec: &'static str,
}

impl IsogenyFixture {
    pub fn base(&self) -> &'static PointFixture {
        point_fixture(self.point).expect("fixture name")
    }

    pub fn isogeny(&self) -> Result<Isogeny> {
        from_spec(&self.base().curve(), self.spec)
    }
}

/// Isogenies σ: E′ → E with a non-torsion P′ on E′.
pub const ISOGENIES: &[IsogenyFixture] = &[
    IsogenyFixture { name: "37a-[2]", point: "37a", spec: "mult:2" },
    IsogenyFixture { name: "37a-[3]", point: "37a", spec: "mult:3" },
    IsogenyFixture { name: "43a-[2]", point: "43a", spec: "mult:2" },
    IsogenyFixture { name: "E25-2isog", point: "E25", spec: "kernel:x" },
    IsogenyFixture { name: "E2-2isog", point: "E2", spec: "kernel:x" },
    // kernel {(0, ±√−2)}
    IsogenyFixture { name: "mordell-2-3isog", point: "mordell-2", spec: "kernel:x" },
];

/// A = 25 with P′ = (−4, 6): [3]P′ lies on the bounded component.
pub const ODD_MULTIPLE: (i64, (i64, i64), u64) = (25, (-4, 6), 3);

/// E_A points for the §6 checks: (A, point).
pub const EA_POINTS: &[(i64, (i64, i64))] = &[
    (25, (-4, 6)),
    (25, (45, 300)),
    (2, (2, 2)),
    (5, (5, 10)),
    (6, (-2, 2)),
    (7, (4, 6)),
    (14, (8, 20)),
    (15, (4, 2)),
    (20, (-4, 4)),
    (31, (16, 60)),
    (36, (-3, 9)),
    (12, (-3, 3)),
    (60, (-6, 12)),
];
