//! Univariate polynomials, Laurent polynomials and square matrices over them.
//!
//! Polynomials are dense, lowest degree first, with trailing zeros trimmed so
//! the zero polynomial is the empty coefficient list. Laurent polynomials are
//! sparse maps from exponent to coefficient. Both are generic over the
//! coefficient ring; exact rationals and Gaussian rationals are the main
//! instances, `Complex64` is used where roots of unity leave `Q(i)`.

use std::collections::BTreeMap;
use std::fmt::{self, Debug};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::rational::{format_ratio, Rational};

pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// `n · 1`.
    fn from_int(n: i64) -> Self {
        let mut acc = Self::zero();
        for _ in 0..n.unsigned_abs() {
            acc = acc + Self::one();
        }
        if n < 0 {
            -acc
        } else {
            acc
        }
    }
}

impl<T> Ring for T where
    T: Clone + PartialEq + Debug + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

pub trait Field: Ring + Div<Output = Self> {}

impl<T: Ring + Div<Output = T>> Field for T {}

/// Polynomial in one variable, coefficients lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c · x^power`.
    pub fn monomial(c: T, power: usize) -> Self {
        let mut coeffs = vec![T::zero(); power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^power`, zero past the end.
    pub fn coeff(&self, power: usize) -> T {
        self.coeffs.get(power).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(), |acc, _| acc * self.clone())
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Field> Poly<T> {
    /// Exact division by a nonzero scalar.
    pub fn div_scalar(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() / c.clone()).collect())
    }
}

impl<T: Ring> Zero for Poly<T> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Ring> One for Poly<T> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}

impl<T: Ring> Add for Poly<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Ring> Sub for Poly<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Ring> Neg for Poly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<T: Ring> Mul for Poly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

impl<T: Ring> Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c:?})"),
                1 => format!("({c:?})z"),
                _ => format!("({c:?})z^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Serialize for Poly<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coeffs.iter().map(format_ratio).collect();
        strings.serialize(s)
    }
}

/// Laurent polynomial: sparse exponent → nonzero coefficient.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<T> {
    terms: BTreeMap<i64, T>,
}

impl<T: Ring> LaurentPoly<T> {
    pub fn monomial(c: T, power: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(power, c);
        }
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, power: i64) -> T {
        self.terms.get(&power).cloned().unwrap_or_else(T::zero)
    }

    pub fn exponents(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    fn insert_add(&mut self, power: i64, c: T) {
        let sum = self.coeff(power) + c;
        if sum.is_zero() {
            self.terms.remove(&power);
        } else {
            self.terms.insert(power, sum);
        }
    }
}

impl<T: Ring> Zero for LaurentPoly<T> {
    fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<T: Ring> One for LaurentPoly<T> {
    fn one() -> Self {
        Self::monomial(T::one(), 0)
    }
}

impl<T: Ring> Add for LaurentPoly<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.insert_add(e, c);
        }
        self
    }
}

impl<T: Ring> Sub for LaurentPoly<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Ring> Neg for LaurentPoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<T: Ring> Mul for LaurentPoly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (ea, a) in &self.terms {
            for (eb, b) in &rhs.terms {
                out.insert_add(ea + eb, a.clone() * b.clone());
            }
        }
        out
    }
}

impl<T: Ring> Debug for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.terms.iter().map(|(e, c)| format!("({c:?})u^{e}")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Square matrix over a commutative ring, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    size: usize,
    data: Vec<R>,
}

pub type PolyMatrix<T> = Matrix<Poly<T>>;
pub type LaurentMatrix<T> = Matrix<LaurentPoly<T>>;

impl<R: Ring> Matrix<R> {
    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            data: vec![R::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::from_fn(size, |i, j| if i == j { R::one() } else { R::zero() })
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                data.push(f(i, j));
            }
        }
        Self { size, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let size = rows.len();
        assert!(rows.iter().all(|r| r.len() == size), "matrix must be square");
        Self {
            size,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: R) {
        self.data[i * self.size + j] = value;
    }

    pub fn trace(&self) -> R {
        (0..self.size).fold(R::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn scale(&self, c: &R) -> Self {
        Self {
            size: self.size,
            data: self.data.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn add_scaled_identity(&self, c: &R) -> Self {
        let mut out = self.clone();
        for i in 0..self.size {
            let v = out.get(i, i).clone() + c.clone();
            out.set(i, i, v);
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            size: self.size,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &R)> {
        self.data
            .iter()
            .enumerate()
            .map(move |(idx, r)| (idx / self.size, idx % self.size, r))
    }
}

impl<R: Ring> Mul for &Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, rhs: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.size, rhs.size);
        let n = self.size;
        Matrix::from_fn(n, |i, j| {
            (0..n).fold(R::zero(), |acc, k| {
                let a = self.get(i, k);
                let b = rhs.get(k, j);
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    acc + a.clone() * b.clone()
                }
            })
        })
    }
}

impl<R: Ring> Add for &Matrix<R> {
    type Output = Matrix<R>;
    fn add(self, rhs: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.size, rhs.size);
        Matrix::from_fn(self.size, |i, j| self.get(i, j).clone() + rhs.get(i, j).clone())
    }
}

impl<R: Ring> Sub for &Matrix<R> {
    type Output = Matrix<R>;
    fn sub(self, rhs: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.size, rhs.size);
        Matrix::from_fn(self.size, |i, j| self.get(i, j).clone() - rhs.get(i, j).clone())
    }
}

impl<R: Ring> Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<&R>> = (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j)).collect())
            .collect();
        f.debug_list().entries(rows).finish()
    }
}

impl Serialize for Matrix<Poly<Rational>> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<&Poly<Rational>>> = (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j)).collect())
            .collect();
        rows.serialize(s)
    }
}

/// Characteristic polynomial `det(λ - A) = Σ_k c_k λ^{K-k}`, `c_0 = 1`.
#[derive(Clone, PartialEq)]
pub struct CharPoly<T> {
    coeffs: Vec<Poly<T>>,
}

impl<T: Ring> Debug for CharPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CharPoly").field("coeffs", &self.coeffs).finish()
    }
}

impl<T: Ring> CharPoly<T> {
    pub fn from_coeffs(coeffs: Vec<Poly<T>>) -> Self {
        Self { coeffs }
    }

    pub fn size(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `λ^{K-k}`.
    pub fn coeff(&self, k: usize) -> &Poly<T> {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Poly<T>] {
        &self.coeffs
    }

    /// `P_2..P_K` in `(λ^K - z^N) + Σ_i P_i λ^{K-i}`; the `z^N` is folded back into `P_K`.
    pub fn hitchin_coordinates(&self, n: u32) -> Vec<Poly<T>> {
        let k = self.size();
        (2..=k)
            .map(|i| {
                if i == k {
                    self.coeffs[i].clone() + Poly::monomial(T::one(), n as usize)
                } else {
                    self.coeffs[i].clone()
                }
            })
            .collect()
    }

    /// Rebuilds the full characteristic polynomial from `P_2..P_K`.
    pub fn from_hitchin_coordinates(k: usize, n: u32, p: &[Poly<T>]) -> Self {
        assert_eq!(p.len() + 1, k, "expected P_2..P_K");
        let mut coeffs = vec![Poly::one(), Poly::zero()];
        for (idx, pi) in p.iter().enumerate() {
            let i = idx + 2;
            if i == k {
                coeffs.push(pi.clone() - Poly::monomial(T::one(), n as usize));
            } else {
                coeffs.push(pi.clone());
            }
        }
        Self { coeffs }
    }
}

impl Serialize for CharPoly<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

/// Characteristic polynomial by the Faddeev–LeVerrier recursion:
/// `M_1 = I`, `c_k = -tr(A M_k)/k`, `M_{k+1} = A M_k + c_k I`.
pub fn char_poly<T: Field>(a: &PolyMatrix<T>) -> CharPoly<T> {
    let n = a.size();
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(Poly::one());
    let mut m = Matrix::<Poly<T>>::identity(n);
    for k in 1..=n {
        let am = a * &m;
        let c = -am.trace().div_scalar(&T::from_int(k as i64));
        m = am.add_scaled_identity(&c);
        coeffs.push(c);
    }
    CharPoly { coeffs }
}
