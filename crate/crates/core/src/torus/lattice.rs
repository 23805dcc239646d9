//! Period lattices of rank six inside `Q(zeta_n)^3`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::TorusError;
use crate::exact::congruence::reduce_mod1;
use crate::exact::cyclotomic::euler_phi;
use crate::exact::{hermite_rows, Matrix};
use crate::scalar::{common_denominator, Scalar};
use crate::{Cyclo, CycloMat, IntMat, RatMat, Rational};

pub type CVec = [Cyclo; 3];

pub fn cvec_add(a: &CVec, b: &CVec) -> CVec {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]
}

pub fn cvec_scale(a: &CVec, q: &Rational) -> CVec {
    [a[0].scale(q), a[1].scale(q), a[2].scale(q)]
}

pub fn cvec_parse(n: u32, s: &[String]) -> Result<CVec, crate::ExactError> {
    if s.len() != 3 {
        return Err(crate::ExactError::DimensionMismatch(format!(
            "expected 3 coordinates, got {}",
            s.len()
        )));
    }
    Ok([
        Cyclo::parse(n, &s[0])?,
        Cyclo::parse(n, &s[1])?,
        Cyclo::parse(n, &s[2])?,
    ])
}

/// Like [`cvec_parse`], with a missing entry meaning the origin.
pub fn cvec_parse_or_zero(n: u32, s: Option<&[String]>) -> Result<CVec, crate::ExactError> {
    match s {
        Some(s) => cvec_parse(n, s),
        None => Ok([Cyclo::int(0), Cyclo::int(0), Cyclo::int(0)]),
    }
}

/// A point of `C^3` with cyclotomic coordinates; interpreted modulo a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusPoint {
    pub coords: [Cyclo; 3],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawLattice {
    conductor: u32,
    basis: Vec<CVec>,
}

/// A rank-six lattice spanned by six vectors of `Q(zeta_n)^3`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawLattice", into = "RawLattice")]
pub struct PeriodLattice {
    conductor: u32,
    basis: Vec<CVec>,
    /// Columns are the flattened basis vectors.
    flat: RatMat,
    /// Six independent rows of `flat` and the inverse of that block.
    pivot_rows: Vec<usize>,
    pivot_inv: RatMat,
    /// A non-real scalar whose multiplication preserves the rational span.
    unit: Cyclo,
    j: RatMat,
}

impl TryFrom<RawLattice> for PeriodLattice {
    type Error = TorusError;
    fn try_from(r: RawLattice) -> Result<Self, TorusError> {
        PeriodLattice::new(r.conductor, r.basis)
    }
}

impl From<PeriodLattice> for RawLattice {
    fn from(l: PeriodLattice) -> Self {
        RawLattice {
            conductor: l.conductor,
            basis: l.basis,
        }
    }
}

impl PartialEq for PeriodLattice {
    /// Equality as lattices (same subgroup of `C^3`), not as bases.
    fn eq(&self, other: &Self) -> bool {
        self.conductor == other.conductor
            && other
                .basis
                .iter()
                .all(|b| self.contains(b).unwrap_or(false))
            && self
                .basis
                .iter()
                .all(|b| other.contains(b).unwrap_or(false))
    }
}

fn flatten(n: u32, v: &CVec) -> Option<Vec<Rational>> {
    let mut out = Vec::with_capacity(3 * euler_phi(n) as usize);
    for c in v {
        let e = c.embed(n).ok()?;
        out.extend_from_slice(e.coeffs());
    }
    Some(out)
}

impl PeriodLattice {
    pub fn new(conductor: u32, basis: Vec<CVec>) -> Result<Self, TorusError> {
        if basis.len() != 6 {
            return Err(TorusError::DegenerateBasis);
        }
        let cols: Vec<Vec<Rational>> = basis
            .iter()
            .map(|b| flatten(conductor, b).ok_or(TorusError::NotTorsion))
            .collect::<Result<_, _>>()?;
        let flat = Matrix::from_cols(cols);
        let (_, piv) = flat.transpose().rref();
        if piv.len() != 6 {
            return Err(TorusError::DegenerateBasis);
        }
        let block = Matrix::from_rows(piv.iter().map(|&r| flat.row(r).to_vec()).collect());
        let pivot_inv = block.inverse().ok_or(TorusError::DegenerateBasis)?;
        let mut lat = PeriodLattice {
            conductor,
            basis,
            flat,
            pivot_rows: piv,
            pivot_inv,
            unit: Cyclo::int(0),
            j: Matrix::zeros(6, 6),
        };
        let unit = lat
            .find_complex_unit()
            .ok_or(TorusError::NoComplexStructure)?;
        lat.j = lat.scalar_matrix(&unit)?;
        lat.unit = unit;
        Ok(lat)
    }

    /// `Z[zeta_3]^3` with basis `e_j, zeta_3 e_j`.
    pub fn eisenstein_cube() -> Self {
        let z = Cyclo::zeta(3, 1);
        let one = Cyclo::int(1);
        let zero = Cyclo::int(0);
        let mut basis = Vec::new();
        for i in 0..3 {
            for s in [&one, &z] {
                let mut v = [zero.clone(), zero.clone(), zero.clone()];
                v[i] = s.clone();
                basis.push(v);
            }
        }
        Self::new(3, basis).expect("standard lattice")
    }

    /// Lattice `{(s_a(x), s_b(x), s_c(x)) : x in Z[zeta_n]}` for Galois twists
    /// when `phi(n) = 6`, with basis images of the power basis.
    pub fn cm_lattice(n: u32, exps: [i64; 3]) -> Result<Self, TorusError> {
        let basis: Vec<CVec> = (0..euler_phi(n) as i64)
            .map(|k| {
                [
                    Cyclo::zeta(n, exps[0] * k),
                    Cyclo::zeta(n, exps[1] * k),
                    Cyclo::zeta(n, exps[2] * k),
                ]
            })
            .collect();
        Self::new(n, basis)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn basis(&self) -> &[CVec] {
        &self.basis
    }

    pub fn complex_unit(&self) -> &Cyclo {
        &self.unit
    }

    /// Multiplication by [`Self::complex_unit`] in lattice coordinates.
    pub fn complex_structure(&self) -> &RatMat {
        &self.j
    }

    /// Rational lattice coordinates of `v`; errors if `v` is outside the rational span.
    pub fn coords(&self, v: &CVec) -> Result<Vec<Rational>, TorusError> {
        let f = flatten(self.conductor, v).ok_or(TorusError::NotTorsion)?;
        let sub: Vec<Rational> = self.pivot_rows.iter().map(|&r| f[r]).collect();
        let c = self.pivot_inv.mul_vec(&sub);
        if self.flat.mul_vec(&c) != f {
            return Err(TorusError::NotTorsion);
        }
        Ok(c)
    }

    pub fn point(&self, c: &[Rational]) -> CVec {
        let mut acc = [Cyclo::int(0), Cyclo::int(0), Cyclo::int(0)];
        for (b, q) in self.basis.iter().zip(c) {
            if !q.is_zero() {
                acc = cvec_add(&acc, &cvec_scale(b, q));
            }
        }
        acc
    }

    pub fn contains(&self, v: &CVec) -> Result<bool, TorusError> {
        Ok(self.coords(v)?.iter().all(Scalar::is_integral))
    }

    /// Torsion point of the torus in reduced lattice coordinates.
    pub fn reduce(&self, v: &CVec) -> Result<Vec<Rational>, TorusError> {
        Ok(reduce_mod1(&self.coords(v)?))
    }

    fn preserves_span(&self, s: &Cyclo) -> bool {
        self.basis
            .iter()
            .all(|b| self.coords(&[s * &b[0], s * &b[1], s * &b[2]]).is_ok())
    }

    fn find_complex_unit(&self) -> Option<Cyclo> {
        let n = self.conductor as i64;
        let mut cands: Vec<Cyclo> = (1..n).map(|k| Cyclo::zeta(n as u32, k)).collect();
        for a in 2..n {
            if num_integer::Integer::gcd(&a, &n) != 1 {
                continue;
            }
            let mut orbit = vec![1i64];
            let mut x = a;
            while x != 1 {
                orbit.push(x);
                x = (x * a) % n;
            }
            for k in 1..n {
                let terms: Vec<(Rational, i64)> =
                    orbit.iter().map(|h| (Rational::one(), h * k)).collect();
                cands.push(Cyclo::from_terms(n as u32, &terms));
            }
        }
        cands
            .into_iter()
            .find(|c| !c.is_real() && self.preserves_span(c))
    }

    /// Matrix of multiplication by a scalar in lattice coordinates.
    pub fn scalar_matrix(&self, s: &Cyclo) -> Result<RatMat, TorusError> {
        let cols: Vec<Vec<Rational>> = self
            .basis
            .iter()
            .map(|b| self.coords(&[s * &b[0], s * &b[1], s * &b[2]]))
            .collect::<Result<_, _>>()?;
        Ok(Matrix::from_cols(cols))
    }

    /// Rational 6x6 matrix of a semilinear map from `self` to `target`.
    pub fn map_matrix(&self, target: &PeriodLattice, m: &Semilinear) -> Result<RatMat, TorusError> {
        let cols: Vec<Vec<Rational>> = self
            .basis
            .iter()
            .map(|b| target.coords(&m.apply(b)))
            .collect::<Result<_, _>>()?;
        Ok(Matrix::from_cols(cols))
    }

    /// Integer 6x6 matrix of a semilinear map, required to send `self` onto `target`.
    pub fn lattice_map(
        &self,
        target: &PeriodLattice,
        m: &Semilinear,
    ) -> Result<IntMat, TorusError> {
        let r = self.map_matrix(target, m)?;
        let i = r.to_integer().ok_or(TorusError::NotLatticePreserving)?;
        if !i.is_unimodular() {
            return Err(TorusError::NotLatticePreserving);
        }
        Ok(i)
    }

    /// Change of coordinates: columns are this lattice's basis in `other`'s coordinates.
    pub fn basis_in(&self, other: &PeriodLattice) -> Result<RatMat, TorusError> {
        let cols: Vec<Vec<Rational>> = self
            .basis
            .iter()
            .map(|b| other.coords(b))
            .collect::<Result<_, _>>()?;
        Ok(Matrix::from_cols(cols))
    }
}

/// `Lambda + sum Z * g_i` for torsion points `g_i`, with its index over `Lambda`.
pub fn make_quotient_lattice(
    base: &PeriodLattice,
    kernel: &[CVec],
) -> Result<(PeriodLattice, u64), TorusError> {
    let mut rows: Vec<Vec<Rational>> = (0..6)
        .map(|i| crate::exact::congruence::one_vec(6, i))
        .collect();
    for g in kernel {
        rows.push(base.coords(g)?);
    }
    let all: Vec<Rational> = rows.iter().flatten().cloned().collect();
    let den = common_denominator(&all);
    let scaled = Matrix::from_rows(rows)
        .scale(&Rational::from_integer(den))
        .to_integer()
        .expect("cleared denominators");
    let h = hermite_rows(&scaled);
    debug_assert_eq!(h.rows(), 6);
    let index = (den.pow(6) / h.det_int().abs()) as u64;
    let basis: Vec<CVec> = (0..6)
        .map(|i| {
            let c: Vec<Rational> = h.row(i).iter().map(|x| Rational::new(*x, den)).collect();
            base.point(&c)
        })
        .collect();
    Ok((PeriodLattice::new(base.conductor, basis)?, index))
}

/// A map `z -> M * kappa(z)` where `kappa` conjugates the flagged coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Semilinear {
    pub matrix: CycloMat,
    pub conj: [bool; 3],
}

impl Semilinear {
    pub fn linear(matrix: CycloMat) -> Self {
        Semilinear {
            matrix,
            conj: [false; 3],
        }
    }

    pub fn is_linear(&self) -> bool {
        self.conj == [false; 3]
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        let k: Vec<Cyclo> = (0..3)
            .map(|i| {
                if self.conj[i] {
                    v[i].conj()
                } else {
                    v[i].clone()
                }
            })
            .collect();
        let w = self.matrix.mul_vec(&k);
        [w[0].clone(), w[1].clone(), w[2].clone()]
    }

    /// `self * A * self^-1` as a complex-linear matrix, if it is one.
    pub fn conjugate(&self, a: &CycloMat) -> Option<CycloMat> {
        let mut ka = a.clone();
        for i in 0..3 {
            for j in 0..3 {
                if self.conj[i] != self.conj[j] && !a[(i, j)].is_zero() {
                    return None;
                }
                if self.conj[i] {
                    ka[(i, j)] = a[(i, j)].conj();
                }
            }
        }
        let inv = self.matrix.inverse()?;
        Some(self.matrix.mul_mat(&ka).mul_mat(&inv))
    }
}

/// An affine self-map of a real torus in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealTorusMap {
    pub matrix: IntMat,
    pub translation: Vec<Rational>,
    pub provenance: Option<Semilinear>,
}

impl RealTorusMap {
    pub fn linear(matrix: IntMat) -> Self {
        RealTorusMap {
            matrix,
            translation: vec![Rational::zero(); 6],
            provenance: None,
        }
    }
}

/// Whether an integer map between tori commutes with the complex structures.
pub fn is_holomorphic(
    m: &IntMat,
    src: &PeriodLattice,
    tgt: &PeriodLattice,
) -> Result<bool, TorusError> {
    let js = src.complex_structure();
    let jt = tgt.scalar_matrix(src.complex_unit())?;
    let mr = m.to_rational::<Rational>();
    Ok(mr.mul_mat(js) == jt.mul_mat(&mr))
}
