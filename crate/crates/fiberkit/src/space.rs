//! Discrete weighted measure spaces, vector fields in `L2(X; C^d)`,
//! multiplication operators, Parseval determining sets, and the Plancherel
//! transforms `F` and `F_I`.
//!
//! Atoms of weight zero are kept in storage but excluded from every
//! almost-everywhere quantifier: they never affect a norm, a Gramian, or a
//! verdict.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec};
use crate::tol;

/// A finite measure space: ordered labeled atoms with nonnegative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpace {
    atoms: Vec<String>,
    weights: Vec<f64>,
}

impl MeasureSpace {
    pub fn new(atoms: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::InvalidInput(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidInput("weights must be finite and >= 0".into()));
        }
        Ok(Self { atoms, weights })
    }

    /// Counting measure on `n` atoms labeled `0..n`.
    pub fn counting(n: usize) -> Self {
        Self {
            atoms: (0..n).map(|i| i.to_string()).collect(),
            weights: vec![1.0; n],
        }
    }

    /// Uniform weight `mass` on `n` atoms labeled `0..n`.
    pub fn uniform(n: usize, mass: f64) -> Self {
        Self {
            atoms: (0..n).map(|i| i.to_string()).collect(),
            weights: vec![mass; n],
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom(&self, i: usize) -> &str {
        &self.atoms[i]
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Indices of atoms with strictly positive weight ("a.e." support).
    pub fn positive_atoms(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.weights[i] > 0.0)
    }

    pub fn has_positive_atom(&self) -> bool {
        self.weights.iter().any(|&w| w > 0.0)
    }
}

/// An element of `L2(X; C^d)`: one vector per atom.
#[derive(Debug, Clone)]
pub struct VectorField {
    space: MeasureSpace,
    dim: usize,
    values: Vec<CVec>,
}

impl VectorField {
    pub fn new(space: MeasureSpace, dim: usize, values: Vec<CVec>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::InvalidInput(format!(
                "{} value vectors for {} atoms",
                values.len(),
                space.len()
            )));
        }
        if values.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidInput("fiber dimension mismatch".into()));
        }
        Ok(Self { space, dim, values })
    }

    pub fn zero(space: MeasureSpace, dim: usize) -> Self {
        let values = vec![CVec::zeros(dim); space.len()];
        Self { space, dim, values }
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, atom: usize) -> &CVec {
        &self.values[atom]
    }

    pub fn value_mut(&mut self, atom: usize) -> &mut CVec {
        &mut self.values[atom]
    }

    pub fn values(&self) -> &[CVec] {
        &self.values
    }

    /// Weighted inner product `sum_x mu(x) <self(x), other(x)>`.
    pub fn inner(&self, other: &VectorField) -> Complex64 {
        assert_eq!(self.space, other.space, "fields must share a space");
        let mut acc = Complex64::new(0.0, 0.0);
        for i in self.space.positive_atoms() {
            acc += other.values[i].dotc(&self.values[i]) * self.space.weight(i);
        }
        acc
    }

    pub fn norm_sqr(&self) -> f64 {
        self.space
            .positive_atoms()
            .map(|i| self.space.weight(i) * self.values[i].norm_squared())
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        assert_eq!(self.space, other.space);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        VectorField {
            space: self.space.clone(),
            dim: self.dim,
            values,
        }
    }

    pub fn scale(&self, c: Complex64) -> VectorField {
        VectorField {
            space: self.space.clone(),
            dim: self.dim,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }
}

/// Multiplication operator `(M_g phi)(x) = g(x) phi(x)`.
pub fn multiply(g: &[Complex64], phi: &VectorField) -> Result<VectorField> {
    if g.len() != phi.space().len() {
        return Err(Error::InvalidInput(format!(
            "multiplier has length {}, space has {} atoms",
            g.len(),
            phi.space().len()
        )));
    }
    let values = phi
        .values()
        .iter()
        .zip(g)
        .map(|(v, &c)| v * c)
        .collect();
    VectorField::new(phi.space().clone(), phi.dim(), values)
}

/// A family `{g_t}_{t in Y}` of bounded functions on `X`, indexed by a
/// second measure space `(Y, nu)`.
#[derive(Debug, Clone)]
pub struct DeterminingSet {
    domain: MeasureSpace,
    index_space: MeasureSpace,
    /// `rows[t][x] = g_t(x)`
    rows: Vec<Vec<Complex64>>,
}

impl DeterminingSet {
    pub fn new(
        domain: MeasureSpace,
        index_space: MeasureSpace,
        rows: Vec<Vec<Complex64>>,
    ) -> Result<Self> {
        if rows.len() != index_space.len() {
            return Err(Error::InvalidInput(format!(
                "{} rows for an index space of {} atoms",
                rows.len(),
                index_space.len()
            )));
        }
        if rows.iter().any(|r| r.len() != domain.len()) {
            return Err(Error::InvalidInput("row length must match the domain".into()));
        }
        Ok(Self {
            domain,
            index_space,
            rows,
        })
    }

    /// The canonical Parseval determining set for a weighted space: one
    /// weighted indicator per positive atom, `g_x = chi_x / sqrt(mu(x))`,
    /// with counting measure on the index.
    pub fn standard(domain: MeasureSpace) -> Result<Self> {
        if !domain.has_positive_atom() {
            return Err(Error::DegenerateSpace);
        }
        let positive: Vec<usize> = domain.positive_atoms().collect();
        let rows: Vec<Vec<Complex64>> = positive
            .iter()
            .map(|&x| {
                let mut row = vec![Complex64::new(0.0, 0.0); domain.len()];
                row[x] = Complex64::new(1.0 / domain.weight(x).sqrt(), 0.0);
                row
            })
            .collect();
        let index_space = MeasureSpace::counting(positive.len());
        Self::new(domain, index_space, rows)
    }

    /// The characters of a finite abelian group, as a determining set on
    /// its dual space (atom mass `1/|G|`), indexed by the group itself with
    /// counting measure: `g_x(alpha) = conj(alpha(x))`.
    pub fn characters(group: &crate::group::FiniteAbelianGroup) -> Self {
        let domain = group.dual_space();
        let n = group.order();
        let rows: Vec<Vec<Complex64>> = (0..n)
            .map(|x| (0..n).map(|alpha| group.character(alpha, x).conj()).collect())
            .collect();
        Self {
            domain,
            index_space: MeasureSpace::counting(n),
            rows,
        }
    }

    pub fn domain(&self) -> &MeasureSpace {
        &self.domain
    }

    pub fn index_space(&self) -> &MeasureSpace {
        &self.index_space
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.rows
    }

    pub fn row(&self, t: usize) -> &[Complex64] {
        &self.rows[t]
    }

    /// The weighted synthesis matrix `B[t, x] = sqrt(nu(t)) sqrt(mu(x))
    /// conj(g_t(x))`, restricted to positive-weight atoms of `X`.
    pub fn weighted_matrix(&self) -> (CMat, Vec<usize>) {
        let cols: Vec<usize> = self.domain.positive_atoms().collect();
        let m = DMatrix::from_fn(self.index_space.len(), cols.len(), |t, j| {
            let x = cols[j];
            self.rows[t][x].conj()
                * (self.index_space.weight(t).sqrt() * self.domain.weight(x).sqrt())
        });
        (m, cols)
    }

    /// Parseval test: `||B* B - I||_F <= tol * ||B||^2` on the
    /// positive-weight atoms.
    pub fn is_parseval(&self, tol_rel: f64) -> Result<bool> {
        if !self.domain.has_positive_atom() {
            return Err(Error::DegenerateSpace);
        }
        let (b, cols) = self.weighted_matrix();
        let gram = b.adjoint() * &b;
        let defect = (&gram - CMat::identity(cols.len(), cols.len())).norm();
        let scale = crate::linalg::operator_norm(&b).powi(2).max(1.0);
        Ok(defect <= tol_rel * scale)
    }

    fn require_parseval(&self, tol_rel: f64) -> Result<()> {
        if !self.is_parseval(tol_rel)? {
            return Err(Error::ContractViolation(
                "the Plancherel transform requires a Parseval determining set".into(),
            ));
        }
        Ok(())
    }

    /// Plancherel transform `(F f)(t) = sum_x mu(x) f(x) conj(g_t(x))`.
    /// An isometry `L2(X, mu) -> L2(Y, nu)` when the set is Parseval.
    pub fn plancherel_transform(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.require_parseval(tol::PARSEVAL)?;
        self.plancherel_unchecked(f)
    }

    pub(crate) fn plancherel_unchecked(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        if f.len() != self.domain.len() {
            return Err(Error::InvalidInput("function length must match the domain".into()));
        }
        Ok((0..self.index_space.len())
            .map(|t| {
                self.domain
                    .positive_atoms()
                    .map(|x| f[x] * self.rows[t][x].conj() * self.domain.weight(x))
                    .sum()
            })
            .collect())
    }

    /// Entrywise Plancherel transform of a vector field: the result is the
    /// `|Y| x I` matrix `(F_I phi)(t, i) = sum_x mu(x) [phi(x)]_i conj(g_t(x))`.
    pub fn plancherel_transform_indexed(&self, phi: &VectorField) -> Result<CMat> {
        self.require_parseval(tol::PARSEVAL)?;
        if phi.space() != &self.domain {
            return Err(Error::DomainMismatch(
                "field does not live on the determining set's domain".into(),
            ));
        }
        let mut out = CMat::zeros(self.index_space.len(), phi.dim());
        for t in 0..self.index_space.len() {
            for x in self.domain.positive_atoms() {
                let w = self.rows[t][x].conj() * self.domain.weight(x);
                for i in 0..phi.dim() {
                    out[(t, i)] += phi.value(x)[i] * w;
                }
            }
        }
        Ok(out)
    }
}
