//! Elements of cyclotomic fields `Q(zeta_n)` in the power basis
//! `1, zeta, ..., zeta^(phi(n)-1)`, reduced modulo the cyclotomic polynomial.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::rc::Rc;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ExactError;
use crate::scalar::Scalar;

pub fn euler_phi(n: u32) -> u32 {
    let mut m = n;
    let mut r = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if m > 1 {
        r -= r / m;
    }
    r
}

pub fn moebius(n: u32) -> i64 {
    let mut m = n;
    let mut k = 0;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            k += 1;
        }
        p += 1;
    }
    if m > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn poly_divexact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // both monic, low-to-high
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; r.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd];
        q[i] = c;
        for (j, dj) in den.iter().enumerate() {
            r[i + j] -= c * dj;
        }
    }
    debug_assert!(r.iter().all(|x| *x == 0));
    q
}

fn compute_cyclotomic_poly(n: u32) -> Vec<i64> {
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_divexact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

thread_local! {
    static PHI_CACHE: RefCell<HashMap<u32, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
}

/// Coefficients of the n-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_poly(n: u32) -> Rc<Vec<i64>> {
    if let Some(p) = PHI_CACHE.with(|c| c.borrow().get(&n).cloned()) {
        return p;
    }
    let p = Rc::new(compute_cyclotomic_poly(n));
    PHI_CACHE.with(|c| c.borrow_mut().insert(n, p.clone()));
    p
}

/// How to treat operands with different conductors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Embedding {
    Forbid,
    Lcm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycloOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Cyclotomic<T: Scalar> {
    conductor: u32,
    #[serde(with = "coeff_strings")]
    coeffs: Vec<T>,
}

mod coeff_strings {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<T: Scalar, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, T: Scalar, D: Deserializer<'de>>(d: D) -> Result<Vec<T>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| {
                s.trim()
                    .parse::<T>()
                    .map_err(|_| serde::de::Error::custom(format!("bad rational '{s}'")))
            })
            .collect()
    }
}

impl<T: Scalar> Cyclotomic<T> {
    /// Element from an arbitrary-length polynomial in zeta_n.
    pub fn from_poly(n: u32, poly: Vec<T>) -> Self {
        assert!(n >= 1);
        Cyclotomic {
            conductor: n,
            coeffs: reduce(n, poly),
        }
    }

    /// Element from terms `c * zeta_n^k` with arbitrary integer exponents.
    pub fn from_terms(n: u32, terms: &[(T, i64)]) -> Self {
        let mut poly = vec![T::zero(); n as usize];
        for (c, k) in terms {
            let e = k.rem_euclid(n as i64) as usize;
            poly[e] = poly[e].clone() + c.clone();
        }
        Self::from_poly(n, poly)
    }

    pub fn zeta(n: u32, k: i64) -> Self {
        Self::from_terms(n, &[(T::one(), k)])
    }

    pub fn rational(q: T) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    pub fn int(v: i64) -> Self {
        Self::rational(T::from_int(v))
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Embed into `Q(zeta_m)` for a multiple `m` of the conductor.
    pub fn embed(&self, m: u32) -> Result<Self, ExactError> {
        if !m.is_multiple_of(self.conductor) {
            return Err(ExactError::IncompatibleConductors(self.conductor, m));
        }
        if m == self.conductor {
            return Ok(self.clone());
        }
        let step = (m / self.conductor) as usize;
        let mut poly = vec![T::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(i * step) % m as usize] = c.clone();
        }
        Ok(Self::from_poly(m, poly))
    }

    fn unify(&self, other: &Self, mode: Embedding) -> Result<(Self, Self), ExactError> {
        if self.conductor == other.conductor {
            return Ok((self.clone(), other.clone()));
        }
        let trivial = |x: &Self| x.conductor == 1;
        if mode == Embedding::Forbid && !trivial(self) && !trivial(other) {
            return Err(ExactError::IncompatibleConductors(
                self.conductor,
                other.conductor,
            ));
        }
        let m = self.conductor.lcm(&other.conductor);
        Ok((self.embed(m)?, other.embed(m)?))
    }

    /// Binary operation with explicit conductor policy.
    pub fn combine(&self, other: &Self, op: CycloOp, mode: Embedding) -> Result<Self, ExactError> {
        let (a, b) = self.unify(other, mode)?;
        let n = a.conductor;
        Ok(match op {
            CycloOp::Add => Cyclotomic {
                conductor: n,
                coeffs: a
                    .coeffs
                    .iter()
                    .zip(&b.coeffs)
                    .map(|(x, y)| x.clone() + y.clone())
                    .collect(),
            },
            CycloOp::Sub => Cyclotomic {
                conductor: n,
                coeffs: a
                    .coeffs
                    .iter()
                    .zip(&b.coeffs)
                    .map(|(x, y)| x.clone() - y.clone())
                    .collect(),
            },
            CycloOp::Mul => {
                let mut poly = vec![T::zero(); a.coeffs.len() + b.coeffs.len()];
                for (i, x) in a.coeffs.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.coeffs.iter().enumerate() {
                        if !y.is_zero() {
                            poly[i + j] = poly[i + j].clone() + x.clone() * y.clone();
                        }
                    }
                }
                Self::from_poly(n, poly)
            }
        })
    }

    /// Image under the Galois automorphism `zeta -> zeta^k`, `gcd(k, n) = 1`.
    pub fn galois(&self, k: i64) -> Self {
        let n = self.conductor as i64;
        let mut poly = vec![T::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = (i as i64 * k).rem_euclid(n) as usize;
            poly[e] = poly[e].clone() + c.clone();
        }
        Self::from_poly(self.conductor, poly)
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<T> {
        if self.is_rational() {
            Some(self.coeffs.first().cloned().unwrap_or_else(T::zero))
        } else {
            None
        }
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Trace to Q divided by the degree; invariant under field embeddings.
    pub fn normalized_trace(&self) -> T {
        let n = self.conductor;
        let mut acc = T::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let g = (i as u32).gcd(&n);
            let m = n / g;
            acc = acc + c.clone() * T::from_frac(moebius(m), euler_phi(m) as i64);
        }
        acc
    }

    /// Field norm to Q.
    pub fn norm(&self) -> T {
        let n = self.conductor as i64;
        let mut prod = Self::int(1);
        for k in 1..n.max(2) {
            if k.gcd(&n) == 1 {
                prod = &prod * &self.galois(k);
            }
        }
        prod.to_rational().expect("norm is rational")
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let n = self.conductor as i64;
        let mut prod = Self::int(1);
        for k in 2..n.max(2) {
            if k.gcd(&n) == 1 {
                prod = &prod * &self.galois(k);
            }
        }
        let nm = (&prod * self).to_rational().expect("norm is rational");
        Ok(prod.scale(&(T::one() / nm)))
    }

    pub fn scale(&self, q: &T) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c.clone() * q.clone()).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self, ExactError> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Parse a sum of terms like `1/3 + 2/3*z`, `-z^2`, `z^4` in `Q(zeta_n)`.
    pub fn parse(n: u32, s: &str) -> Result<Self, ExactError> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(ExactError::Parse("empty expression".into()));
        }
        let mut terms: Vec<(T, i64)> = Vec::new();
        let bytes: Vec<char> = src.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1;
            if bytes[i] == '+' || bytes[i] == '-' {
                if bytes[i] == '-' {
                    sign = -1;
                }
                i += 1;
            }
            let start = i;
            let mut depth = 0;
            while i < bytes.len() && !(depth == 0 && (bytes[i] == '+' || bytes[i] == '-')) {
                match bytes[i] {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    _ => {}
                }
                i += 1;
            }
            let term: String = bytes[start..i].iter().collect();
            if term.is_empty() {
                return Err(ExactError::Parse(format!("dangling sign in '{s}'")));
            }
            let (coef_str, zpart) = match term.find('z') {
                Some(p) => (
                    term[..p].trim_end_matches('*').to_string(),
                    Some(term[p + 1..].to_string()),
                ),
                None => (term.clone(), None),
            };
            let coef = if coef_str.is_empty() {
                T::one()
            } else {
                coef_str
                    .parse::<T>()
                    .map_err(|_| ExactError::Parse(format!("bad coefficient '{coef_str}'")))?
            };
            let exp = match zpart {
                None => 0,
                Some(z) if z.is_empty() => 1,
                Some(z) => {
                    // optional conductor suffix as printed by Display, e.g. `z9^2`
                    let digits = z.len() - z.trim_start_matches(|c: char| c.is_ascii_digit()).len();
                    if digits > 0 && z[..digits].parse::<u32>().ok() != Some(n) {
                        return Err(ExactError::Parse(format!("'{term}' is not in Q(zeta_{n})")));
                    }
                    let z = &z[digits..];
                    if z.is_empty() {
                        1
                    } else {
                        let e = z
                            .strip_prefix('^')
                            .ok_or_else(|| ExactError::Parse(format!("bad power '{z}'")))?;
                        let e = e.trim_start_matches('(').trim_end_matches(')');
                        e.parse::<i64>()
                            .map_err(|_| ExactError::Parse(format!("bad exponent '{e}'")))?
                    }
                }
            };
            let coef = if sign < 0 { -coef } else { coef };
            terms.push((coef, exp));
        }
        Ok(Self::from_terms(n, &terms))
    }
}

fn reduce<T: Scalar>(n: u32, mut poly: Vec<T>) -> Vec<T> {
    let phi = cyclotomic_poly(n);
    let d = phi.len() - 1;
    if poly.len() < d {
        poly.resize(d, T::zero());
        return poly;
    }
    for i in (d..poly.len()).rev() {
        let c = std::mem::replace(&mut poly[i], T::zero());
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi.iter().enumerate().take(d) {
            if *pj != 0 {
                let k = i - d + j;
                poly[k] = poly[k].clone() - c.clone() * T::from_int(*pj);
            }
        }
    }
    poly.truncate(d);
    poly
}

impl<T: Scalar> PartialEq for Cyclotomic<T> {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        match self.unify(other, Embedding::Lcm) {
            Ok((a, b)) => a.coeffs == b.coeffs,
            Err(_) => false,
        }
    }
}

impl<T: Scalar> Eq for Cyclotomic<T> {}

impl<T: Scalar> Hash for Cyclotomic<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.normalized_trace().hash(state);
    }
}

impl<T: Scalar> Zero for Cyclotomic<T> {
    fn zero() -> Self {
        Self::int(0)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl<T: Scalar> One for Cyclotomic<T> {
    fn one() -> Self {
        Self::int(1)
    }
}

impl<'a, T: Scalar> Add<&'a Cyclotomic<T>> for &'a Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn add(self, rhs: &Cyclotomic<T>) -> Cyclotomic<T> {
        self.combine(rhs, CycloOp::Add, Embedding::Lcm)
            .expect("lcm embedding")
    }
}

impl<'a, T: Scalar> Sub<&'a Cyclotomic<T>> for &'a Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn sub(self, rhs: &Cyclotomic<T>) -> Cyclotomic<T> {
        self.combine(rhs, CycloOp::Sub, Embedding::Lcm)
            .expect("lcm embedding")
    }
}

impl<'a, T: Scalar> Mul<&'a Cyclotomic<T>> for &'a Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn mul(self, rhs: &Cyclotomic<T>) -> Cyclotomic<T> {
        self.combine(rhs, CycloOp::Mul, Embedding::Lcm)
            .expect("lcm embedding")
    }
}

impl<T: Scalar> Add for Cyclotomic<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Scalar> AddAssign<&Cyclotomic<T>> for Cyclotomic<T> {
    fn add_assign(&mut self, rhs: &Cyclotomic<T>) {
        *self = &*self + rhs;
    }
}

impl<T: Scalar> Sub for Cyclotomic<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for Cyclotomic<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<T: Scalar> Neg for Cyclotomic<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<T: Scalar> Neg for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        -self.clone()
    }
}

impl<T: Scalar> fmt::Display for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &T::zero();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                (_, false) => write!(f, "{a}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "z{}", self.conductor)?,
                _ => write!(f, "z{}^{}", self.conductor, i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
