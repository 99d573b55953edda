//! Exact integer arithmetic: 2x2 matrices, vectors, affine maps and the
//! handful of number-theoretic helpers the solvers share.
//!
//! Every integer is a [`BigInt`]; products of matrices grow exponentially in
//! the word length, so nothing here uses fixed-width arithmetic.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Int = BigInt;

/// Shorthand for building a [`BigInt`] from a machine integer.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Non-negative gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: &Int, b: &Int) -> Int {
    a.gcd(b)
}

/// Extended Euclid: returns `(g, u, v)` with `u*a + v*b = g = gcd(a, b) >= 0`.
///
/// Coefficients follow the classical recursion on `|a|, |b|`, with signs
/// pushed back afterwards, so `ext_gcd(2, 3) = (1, -1, 1)`.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let (g, u, v) = ext_gcd_nonneg(&a.abs(), &b.abs());
    let u = if a.is_negative() { -u } else { u };
    let v = if b.is_negative() { -v } else { v };
    (g, u, v)
}

fn ext_gcd_nonneg(a: &Int, b: &Int) -> (Int, Int, Int) {
    // iterative form of: egcd(a, 0) = (a, 1, 0); egcd(a, b) = (g, y, x - (a/b) y)
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Int::one(), Int::zero());
    let (mut t0, mut t1) = (Int::zero(), Int::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    (r0, s0, t0)
}

/// Exact division, `None` when `b` does not divide `a` (or `b = 0`).
pub fn exact_div(a: &Int, b: &Int) -> Option<Int> {
    if b.is_zero() {
        return None;
    }
    let (q, r) = a.div_rem(b);
    r.is_zero().then_some(q)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vec2 {
    pub v1: Int,
    pub v2: Int,
}

impl Vec2 {
    pub fn new(v1: Int, v2: Int) -> Self {
        Vec2 { v1, v2 }
    }

    pub fn from_i64(v1: i64, v2: i64) -> Self {
        Vec2::new(int(v1), int(v2))
    }

    pub fn is_zero(&self) -> bool {
        self.v1.is_zero() && self.v2.is_zero()
    }

    pub fn neg(&self) -> Vec2 {
        Vec2::new(-&self.v1, -&self.v2)
    }

    pub fn dot(&self, other: &Vec2) -> Int {
        &self.v1 * &other.v1 + &self.v2 * &other.v2
    }

    pub fn content(&self) -> Int {
        gcd(&self.v1, &self.v2)
    }

    pub fn max_abs(&self) -> Int {
        self.v1.abs().max(self.v2.abs())
    }
}

impl fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.v1, self.v2)
    }
}

/// Splits `v` into `g * unit` with `gcd(unit) = 1`, `g > 0`, and the first
/// nonzero component of `unit` positive; `v = ±g·unit`.
pub fn primitive(v: &Vec2) -> Result<(Vec2, Int)> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let g = v.content();
    let mut unit = Vec2::new(&v.v1 / &g, &v.v2 / &g);
    let first = if unit.v1.is_zero() { &unit.v2 } else { &unit.v1 };
    if first.is_negative() {
        unit = unit.neg();
    }
    Ok((unit, g))
}

/// A general 2x2 integer matrix `(m11 m12; m21 m22)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2 {
    pub m11: Int,
    pub m12: Int,
    pub m21: Int,
    pub m22: Int,
}

impl Mat2 {
    pub fn new(m11: Int, m12: Int, m21: Int, m22: Int) -> Self {
        Mat2 { m11, m12, m21, m22 }
    }

    pub fn from_i64(rows: [[i64; 2]; 2]) -> Self {
        Mat2::new(int(rows[0][0]), int(rows[0][1]), int(rows[1][0]), int(rows[1][1]))
    }

    pub fn identity() -> Self {
        Mat2::from_i64([[1, 0], [0, 1]])
    }

    pub fn zero() -> Self {
        Mat2::from_i64([[0, 0], [0, 0]])
    }

    pub fn is_zero(&self) -> bool {
        self.m11.is_zero() && self.m12.is_zero() && self.m21.is_zero() && self.m22.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::identity()
    }

    pub fn det(&self) -> Int {
        &self.m11 * &self.m22 - &self.m12 * &self.m21
    }

    /// `(det, rank)`; rank is decided symbolically from the zero test and
    /// the determinant.
    pub fn det_rank(&self) -> (Int, u8) {
        let det = self.det();
        let rank = if self.is_zero() {
            0
        } else if det.is_zero() {
            1
        } else {
            2
        };
        (det, rank)
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2::new(
            &self.m11 * &v.v1 + &self.m12 * &v.v2,
            &self.m21 * &v.v1 + &self.m22 * &v.v2,
        )
    }

    /// Row vector times matrix: `rowᵀ · self`.
    pub fn row_apply(&self, row: &Vec2) -> Vec2 {
        Vec2::new(
            &row.v1 * &self.m11 + &row.v2 * &self.m21,
            &row.v1 * &self.m12 + &row.v2 * &self.m22,
        )
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(-&self.m11, -&self.m12, -&self.m21, -&self.m22)
    }

    pub fn column(&self, j: usize) -> Vec2 {
        match j {
            0 => Vec2::new(self.m11.clone(), self.m21.clone()),
            _ => Vec2::new(self.m12.clone(), self.m22.clone()),
        }
    }

    pub fn row(&self, i: usize) -> Vec2 {
        match i {
            0 => Vec2::new(self.m11.clone(), self.m12.clone()),
            _ => Vec2::new(self.m21.clone(), self.m22.clone()),
        }
    }

    pub fn is_ut(&self) -> bool {
        self.m21.is_zero()
    }

    pub fn to_ut(&self) -> Option<UTMat> {
        self.is_ut()
            .then(|| UTMat::new(self.m11.clone(), self.m12.clone(), self.m22.clone()))
    }

    pub fn max_abs(&self) -> Int {
        [&self.m11, &self.m12, &self.m21, &self.m22]
            .into_iter()
            .map(|e| e.abs())
            .max()
            .unwrap()
    }

    /// Inverse of a unimodular matrix (`det = ±1`); `None` otherwise.
    pub fn unimodular_inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if !det.abs().is_one() {
            return None;
        }
        // inverse = adj / det, and 1/det = det for det = ±1
        Some(Mat2::new(
            &self.m22 * &det,
            -&self.m12 * &det,
            -&self.m21 * &det,
            &self.m11 * &det,
        ))
    }

    pub fn pow(&self, k: u32) -> Mat2 {
        let mut acc = Mat2::identity();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, r: &Mat2) -> Mat2 {
        Mat2::new(
            &self.m11 * &r.m11 + &self.m12 * &r.m21,
            &self.m11 * &r.m12 + &self.m12 * &r.m22,
            &self.m21 * &r.m11 + &self.m22 * &r.m21,
            &self.m21 * &r.m12 + &self.m22 * &r.m22,
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, r: Mat2) -> Mat2 {
        &self * &r
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.m11, self.m12, self.m21, self.m22)
    }
}

/// Product `ms[w0] · ms[w1] · … · ms[wk]` of a generator word.
pub fn product<'a>(gens: &'a [Mat2], word: impl IntoIterator<Item = &'a usize>) -> Option<Mat2> {
    let mut acc = Mat2::identity();
    for &i in word {
        acc = &acc * gens.get(i)?;
    }
    Some(acc)
}

/// Upper-triangular matrix `(a b; 0 c)`; the bottom-left entry does not exist.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UTMat {
    pub a: Int,
    pub b: Int,
    pub c: Int,
}

impl UTMat {
    pub fn new(a: Int, b: Int, c: Int) -> Self {
        UTMat { a, b, c }
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Self {
        UTMat::new(int(a), int(b), int(c))
    }

    pub fn identity() -> Self {
        UTMat::from_i64(1, 0, 1)
    }

    pub fn to_mat2(&self) -> Mat2 {
        Mat2::new(self.a.clone(), self.b.clone(), Int::zero(), self.c.clone())
    }

    pub fn det(&self) -> Int {
        &self.a * &self.c
    }

    pub fn det_rank(&self) -> (Int, u8) {
        self.to_mat2().det_rank()
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2::new(&self.a * &v.v1 + &self.b * &v.v2, &self.c * &v.v2)
    }

    /// `J·Mᵀ·J` with `J` the anti-diagonal permutation: `(a b; 0 c) ↦ (c b; 0 a)`.
    /// Reverses products, `(XY)^τ = Y^τ X^τ`.
    pub fn anti_transpose(&self) -> UTMat {
        UTMat::new(self.c.clone(), self.b.clone(), self.a.clone())
    }

    pub fn has_unit_diagonal(&self) -> bool {
        self.a.abs().is_one() && self.c.abs().is_one()
    }
}

impl Mul for &UTMat {
    type Output = UTMat;

    fn mul(self, r: &UTMat) -> UTMat {
        UTMat::new(
            &self.a * &r.a,
            &self.a * &r.b + &self.b * &r.c,
            &self.c * &r.c,
        )
    }
}

impl Mul for UTMat {
    type Output = UTMat;

    fn mul(self, r: UTMat) -> UTMat {
        &self * &r
    }
}

impl fmt::Debug for UTMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; 0 {})", self.a, self.b, self.c)
    }
}

/// Product of a word over upper-triangular generators.
pub fn ut_product<'a>(gens: &'a [UTMat], word: impl IntoIterator<Item = &'a usize>) -> Option<UTMat> {
    let mut acc = UTMat::identity();
    for &i in word {
        acc = &acc * gens.get(i)?;
    }
    Some(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    Z,
    Q,
}

/// `x ↦ (a·x + b) / c`, stored in canonical projective form: `c > 0`,
/// `gcd(a, b, c) = 1` over Q (with `0 ↦ 0/1`), and `c = 1` over Z.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    a: Int,
    b: Int,
    c: Int,
    domain: Domain,
}

impl AffineMap {
    pub fn z(a: Int, b: Int) -> Self {
        AffineMap { a, b, c: Int::one(), domain: Domain::Z }
    }

    pub fn z_i64(a: i64, b: i64) -> Self {
        AffineMap::z(int(a), int(b))
    }

    pub fn q(a: Int, b: Int, c: Int) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let (a, b, c) = if a.is_zero() && b.is_zero() {
            (a, b, Int::one())
        } else {
            let g = gcd(&gcd(&a, &b), &c);
            let s = if c.is_negative() { -g } else { g };
            (a / &s, b / &s, c / &s)
        };
        Ok(AffineMap { a, b, c, domain: Domain::Q })
    }

    pub fn q_i64(a: i64, b: i64, c: i64) -> Result<Self> {
        AffineMap::q(int(a), int(b), int(c))
    }

    pub fn a(&self) -> &Int {
        &self.a
    }

    pub fn b(&self) -> &Int {
        &self.b
    }

    pub fn c(&self) -> &Int {
        &self.c
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn is_constant(&self) -> bool {
        self.a.is_zero()
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap> {
        if self.domain != inner.domain {
            return Err(Error::DomainMismatch);
        }
        let m = &self.to_ut() * &inner.to_ut();
        match self.domain {
            Domain::Z => Ok(AffineMap::z(m.a, m.b)),
            Domain::Q => AffineMap::q(m.a, m.b, m.c),
        }
    }

    pub fn apply(&self, x: &BigRational) -> Result<BigRational> {
        if self.domain == Domain::Z && !x.is_integer() {
            return Err(Error::NotIntegral(x.to_string()));
        }
        let num = BigRational::from_integer(self.a.clone()) * x + BigRational::from_integer(self.b.clone());
        Ok(num / BigRational::from_integer(self.c.clone()))
    }

    pub fn apply_int(&self, x: &Int) -> Result<BigRational> {
        self.apply(&BigRational::from_integer(x.clone()))
    }

    /// The matrix `(a b; 0 c)` representing this map.
    pub fn to_ut(&self) -> UTMat {
        UTMat::new(self.a.clone(), self.b.clone(), self.c.clone())
    }

    pub fn from_ut(m: &UTMat, domain: Domain) -> Result<AffineMap> {
        match domain {
            Domain::Z if m.c.is_one() => Ok(AffineMap::z(m.a.clone(), m.b.clone())),
            Domain::Z => Err(Error::Precondition(format!(
                "matrix {m:?} has bottom-right entry != 1; not a Z-affine map"
            ))),
            Domain::Q => AffineMap::q(m.a.clone(), m.b.clone(), m.c.clone()),
        }
    }

    pub fn identity(domain: Domain) -> AffineMap {
        AffineMap { a: Int::one(), b: Int::zero(), c: Int::one(), domain }
    }
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x ↦ ({}x + {})/{} [{:?}]", self.a, self.b, self.c, self.domain)
    }
}
