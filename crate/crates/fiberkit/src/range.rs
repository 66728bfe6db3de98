//! Range functions, range operators, and the correspondence with
//! multiplication-invariant operators.
//!
//! A range function assigns to every atom `x` a subspace `J(x)` of the
//! ambient fiber `C^d`, stored as a matrix with orthonormal columns. A range
//! operator is a field of blocks `R(x): J(x) -> J'(x)` written in those
//! bases; its direct integral acts fiberwise on the space `V_J` of fields
//! with `phi(x) in J(x)` a.e. On a finite atom set the indicator functions
//! of the atoms form a determining set, so an operator commutes with every
//! multiplication exactly when its matrix is block diagonal across atoms:
//! [`decompose`] checks that and extracts the fibers.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::space::{MeasureSpace, VectorField};
use crate::tol;

/// A measurable range function at desk scale: one orthonormal basis per atom.
#[derive(Debug, Clone)]
pub struct RangeFunction {
    space: MeasureSpace,
    ambient_dim: usize,
    bases: Vec<CMat>, // d x k(x), orthonormal columns
}

impl RangeFunction {
    /// Validates that every basis has orthonormal columns.
    pub fn new(space: MeasureSpace, ambient_dim: usize, bases: Vec<CMat>) -> Result<Self> {
        if bases.len() != space.len() {
            return Err(Error::InvalidInput(format!(
                "{} bases for {} atoms",
                bases.len(),
                space.len()
            )));
        }
        for (x, b) in bases.iter().enumerate() {
            if b.nrows() != ambient_dim {
                return Err(Error::InvalidInput(format!(
                    "basis at atom {x} has {} rows, ambient dimension is {ambient_dim}",
                    b.nrows()
                )));
            }
            let k = b.ncols();
            let defect = (b.adjoint() * b - CMat::identity(k, k)).norm();
            if defect > tol::ORTHONORMAL * (k.max(1) as f64) {
                return Err(Error::InvalidInput(format!(
                    "basis at atom {x} is not orthonormal (defect {defect:.3e})"
                )));
            }
        }
        Ok(Self {
            space,
            ambient_dim,
            bases,
        })
    }

    /// Fibers spanned by the generators: per atom, an orthonormal basis of
    /// `span{phi_i(x)}` obtained by singular value thresholding. An empty
    /// generator list yields the trivial range function.
    pub fn from_generators(fields: &[VectorField], threshold: Option<f64>) -> Result<Self> {
        Self::from_generators_mode(fields, threshold, false)
    }

    /// Same as [`from_generators`](Self::from_generators) with a rayon
    /// parallel fiber map. Output is byte-identical to the sequential path.
    pub fn from_generators_par(fields: &[VectorField], threshold: Option<f64>) -> Result<Self> {
        Self::from_generators_mode(fields, threshold, true)
    }

    fn from_generators_mode(
        fields: &[VectorField],
        threshold: Option<f64>,
        parallel: bool,
    ) -> Result<Self> {
        let Some(first) = fields.first() else {
            return Err(Error::InvalidInput(
                "cannot infer the space of a trivial range function from zero generators; \
                 use RangeFunction::trivial"
                    .into(),
            ));
        };
        let space = first.space().clone();
        let dim = first.dim();
        for f in fields {
            if f.space() != &space || f.dim() != dim {
                return Err(Error::DomainMismatch(
                    "generators must share their space and ambient dimension".into(),
                ));
            }
        }
        let value_matrix = |x: usize| {
            let mut m = CMat::zeros(dim, fields.len());
            for (i, f) in fields.iter().enumerate() {
                m.set_column(i, f.value(x));
            }
            m
        };
        // rank cutoff relative to the field-global scale, so that fibers
        // holding nothing but roundoff of exact zeros stay trivial
        let thresh = match threshold {
            Some(t) => t,
            None => {
                let global = (0..space.len())
                    .map(|x| linalg::operator_norm(&value_matrix(x)))
                    .fold(0.0, f64::max);
                tol::field_rank_threshold(dim, fields.len(), space.len(), global)
            }
        };
        let compute = |x: usize| -> Result<CMat> {
            linalg::orthonormal_range(&value_matrix(x), Some(thresh))
        };
        let bases = map_fibers(space.len(), parallel, compute)?;
        Ok(Self {
            space,
            ambient_dim: dim,
            bases,
        })
    }

    /// Full fibers `J(x) = C^d` everywhere.
    pub fn full(space: MeasureSpace, dim: usize) -> Self {
        let bases = vec![CMat::identity(dim, dim); space.len()];
        Self {
            space,
            ambient_dim: dim,
            bases,
        }
    }

    /// Zero fibers everywhere.
    pub fn trivial(space: MeasureSpace, dim: usize) -> Self {
        let bases = vec![CMat::zeros(dim, 0); space.len()];
        Self {
            space,
            ambient_dim: dim,
            bases,
        }
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis_at(&self, x: usize) -> &CMat {
        &self.bases[x]
    }

    pub fn dim_at(&self, x: usize) -> usize {
        self.bases[x].ncols()
    }

    /// `x -> dim J(x)` for every atom (consult the space for which atoms
    /// carry positive weight).
    pub fn dimension_function(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.ncols()).collect()
    }

    pub fn projector_at(&self, x: usize) -> CMat {
        &self.bases[x] * self.bases[x].adjoint()
    }

    /// Orthogonal projection of a field onto `V_J`, fiber by fiber.
    pub fn project(&self, phi: &VectorField) -> Result<VectorField> {
        if phi.space() != &self.space || phi.dim() != self.ambient_dim {
            return Err(Error::DomainMismatch(
                "field does not match the range function's space".into(),
            ));
        }
        let values = (0..self.space.len())
            .map(|x| &self.bases[x] * (self.bases[x].adjoint() * phi.value(x)))
            .collect();
        VectorField::new(self.space.clone(), self.ambient_dim, values)
    }

    /// Equality a.e.: the fiber projections agree on every positive atom.
    pub fn equal_ae(&self, other: &RangeFunction, tol: f64) -> bool {
        if self.space != other.space || self.ambient_dim != other.ambient_dim {
            return false;
        }
        self.space.positive_atoms().all(|x| {
            (self.projector_at(x) - other.projector_at(x)).norm() <= tol
        })
    }

    fn same_carrier(&self, other: &RangeFunction) -> bool {
        self.space == other.space
    }
}

fn map_fibers<T: Send>(
    n: usize,
    parallel: bool,
    f: impl Fn(usize) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    if parallel {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

/// A field of blocks `R(x): J(x) -> J'(x)` in the stored bases.
#[derive(Debug, Clone)]
pub struct RangeOperator {
    domain: RangeFunction,
    codomain: RangeFunction,
    blocks: Vec<CMat>, // k'(x) x k(x)
}

/// Fiberwise classification flags for a range operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatorFlags {
    pub unitary: bool,
    pub normal: bool,
    pub isometry: bool,
    pub partial_isometry: bool,
    pub injective: bool,
}

/// Fiber spectra and their essential range.
#[derive(Debug, Clone)]
pub struct SpectraReport {
    /// Eigenvalue multiset of each fiber block, sorted by (re, im).
    pub per_atom: Vec<Vec<Complex64>>,
    /// Union of the fiber spectra over positive-weight atoms, deduplicated.
    /// Finite unions are already closed; [`closure`] is applied anyway to
    /// mirror the set-valued definition.
    pub essential_range: Vec<Complex64>,
}

/// Closure of a finite point set: the identity map. Kept as an explicit
/// step so the essential-range pipeline matches its set-valued definition.
pub fn closure(points: Vec<Complex64>) -> Vec<Complex64> {
    points
}

impl RangeOperator {
    pub fn new(domain: RangeFunction, codomain: RangeFunction, blocks: Vec<CMat>) -> Result<Self> {
        if !domain.same_carrier(&codomain) {
            return Err(Error::DomainMismatch(
                "domain and codomain must live on the same measure space".into(),
            ));
        }
        if blocks.len() != domain.space().len() {
            return Err(Error::InvalidInput(format!(
                "{} blocks for {} atoms",
                blocks.len(),
                domain.space().len()
            )));
        }
        for (x, b) in blocks.iter().enumerate() {
            if b.nrows() != codomain.dim_at(x) || b.ncols() != domain.dim_at(x) {
                return Err(Error::InvalidInput(format!(
                    "block at atom {x} has shape {}x{}, expected {}x{}",
                    b.nrows(),
                    b.ncols(),
                    codomain.dim_at(x),
                    domain.dim_at(x)
                )));
            }
        }
        Ok(Self {
            domain,
            codomain,
            blocks,
        })
    }

    pub fn identity(j: &RangeFunction) -> Self {
        let blocks = (0..j.space().len())
            .map(|x| CMat::identity(j.dim_at(x), j.dim_at(x)))
            .collect();
        Self {
            domain: j.clone(),
            codomain: j.clone(),
            blocks,
        }
    }

    pub fn domain(&self) -> &RangeFunction {
        &self.domain
    }

    pub fn codomain(&self) -> &RangeFunction {
        &self.codomain
    }

    pub fn block_at(&self, x: usize) -> &CMat {
        &self.blocks[x]
    }

    /// The block expressed in ambient coordinates: `B'(x) R(x) B(x)*`.
    /// Basis independent, used for a.e. equality of range operators.
    pub fn ambient_block(&self, x: usize) -> CMat {
        self.codomain.basis_at(x) * &self.blocks[x] * self.domain.basis_at(x).adjoint()
    }

    pub fn approx_eq(&self, other: &RangeOperator, tol: f64) -> bool {
        self.domain.same_carrier(&other.domain)
            && self
                .domain
                .space()
                .positive_atoms()
                .all(|x| (self.ambient_block(x) - other.ambient_block(x)).norm() <= tol)
    }

    /// Apply fiberwise to a field in `V_J` (the field is compressed onto the
    /// domain fibers first, which is the identity for fields of `V_J`).
    pub fn apply(&self, phi: &VectorField) -> Result<VectorField> {
        if phi.space() != self.domain.space() || phi.dim() != self.domain.ambient_dim() {
            return Err(Error::DomainMismatch("field does not match the domain".into()));
        }
        let values = (0..phi.space().len())
            .map(|x| {
                let coords = self.domain.basis_at(x).adjoint() * phi.value(x);
                self.codomain.basis_at(x) * (&self.blocks[x] * coords)
            })
            .collect();
        VectorField::new(phi.space().clone(), self.codomain.ambient_dim(), values)
    }

    /// `sup_x ||R(x)||_op` over positive-weight atoms.
    pub fn op_norm(&self) -> f64 {
        self.domain
            .space()
            .positive_atoms()
            .map(|x| linalg::operator_norm(&self.blocks[x]))
            .fold(0.0, f64::max)
    }

    /// The largest constant `C` with `||R(x) v|| >= C ||v||` on every
    /// positive-weight fiber; infinity when every fiber is trivial.
    pub fn lower_bound(&self) -> f64 {
        self.domain
            .space()
            .positive_atoms()
            .filter(|&x| self.domain.dim_at(x) > 0)
            .map(|x| linalg::sigma_min(&self.blocks[x]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Fiberwise inverse. Every positive-weight block must be square with
    /// `sigma_min >= tol`; blocks at zero-weight atoms are set to zero.
    pub fn invert(&self, tol: f64) -> Result<RangeOperator> {
        let n = self.domain.space().len();
        let mut blocks = Vec::with_capacity(n);
        for x in 0..n {
            if self.domain.space().weight(x) <= 0.0 {
                blocks.push(CMat::zeros(self.domain.dim_at(x), self.codomain.dim_at(x)));
                continue;
            }
            let b = &self.blocks[x];
            if b.nrows() != b.ncols() {
                return Err(Error::NonInvertible {
                    atom: x,
                    sigma_min: 0.0,
                });
            }
            let smin = linalg::sigma_min(b);
            if smin < tol {
                return Err(Error::NonInvertible { atom: x, sigma_min: smin });
            }
            if b.nrows() == 0 {
                blocks.push(CMat::zeros(0, 0));
                continue;
            }
            let inv = b.clone().try_inverse().ok_or(Error::NonInvertible {
                atom: x,
                sigma_min: smin,
            })?;
            blocks.push(inv);
        }
        RangeOperator::new(self.codomain.clone(), self.domain.clone(), blocks)
    }

    /// Fiberwise adjoint `R*(x) = (R(x))*`, a range operator `J' -> J`.
    pub fn adjoint(&self) -> RangeOperator {
        let blocks = self.blocks.iter().map(|b| b.adjoint()).collect();
        RangeOperator {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            blocks,
        }
    }

    /// Composition `self . inner` (apply `inner` first). The codomain of
    /// `inner` must agree with the domain of `self` a.e.; a change of basis
    /// between the two representations of that space is applied.
    pub fn compose(&self, inner: &RangeOperator) -> Result<RangeOperator> {
        if !inner.codomain.equal_ae(&self.domain, 1e-9) {
            return Err(Error::DomainMismatch(
                "inner codomain does not match outer domain".into(),
            ));
        }
        let blocks = (0..self.blocks.len())
            .map(|x| {
                let change = self.domain.basis_at(x).adjoint() * inner.codomain.basis_at(x);
                &self.blocks[x] * change * &inner.blocks[x]
            })
            .collect();
        RangeOperator::new(inner.domain.clone(), self.codomain.clone(), blocks)
    }

    /// Fiberwise flags over positive-weight atoms, each within `tol`
    /// (Frobenius residual for the defining identity, `sigma_min > tol` for
    /// injectivity).
    pub fn classify_flags(&self, tol: f64) -> OperatorFlags {
        let mut flags = OperatorFlags {
            unitary: true,
            normal: true,
            isometry: true,
            partial_isometry: true,
            injective: true,
        };
        for x in self.domain.space().positive_atoms() {
            let b = &self.blocks[x];
            let (k_out, k_in) = (b.nrows(), b.ncols());
            let gram = b.adjoint() * b;
            let eye_in = CMat::identity(k_in, k_in);
            let isometry = (&gram - &eye_in).norm() <= tol;
            flags.isometry &= isometry;
            flags.injective &= linalg::sigma_min(b) > tol;
            flags.partial_isometry &= (&gram * &gram - &gram).norm() <= tol;
            if k_out == k_in {
                let cogram = b * b.adjoint();
                flags.normal &= (&gram - &cogram).norm() <= tol;
                flags.unitary &=
                    isometry && (&cogram - CMat::identity(k_out, k_out)).norm() <= tol;
            } else {
                flags.normal = false;
                flags.unitary = false;
            }
        }
        flags
    }

    /// Per-atom kernels and image closures (Lemma-level fiber statements:
    /// `K(x) = ker R(x)` and `J''(x) = R(x)[J(x)]`, the latter closed for
    /// free in finite dimensions).
    pub fn kernel_and_closure(&self) -> Result<(RangeFunction, RangeFunction)> {
        let space = self.domain.space().clone();
        let mut kernel_bases = Vec::with_capacity(space.len());
        let mut image_bases = Vec::with_capacity(space.len());
        for x in 0..space.len() {
            let mut kb = self.domain.basis_at(x) * linalg::null_space(&self.blocks[x], None)?;
            linalg::fix_column_phases(&mut kb);
            kernel_bases.push(kb);
            let mut ib = self.codomain.basis_at(x) * linalg::orthonormal_range(&self.blocks[x], None)?;
            linalg::fix_column_phases(&mut ib);
            image_bases.push(ib);
        }
        let kernel = RangeFunction::new(space.clone(), self.domain.ambient_dim(), kernel_bases)?;
        let image = RangeFunction::new(space, self.codomain.ambient_dim(), image_bases)?;
        Ok((kernel, image))
    }

    fn require_endomorphism(&self) -> Result<()> {
        for x in self.domain.space().positive_atoms() {
            if self.blocks[x].nrows() != self.blocks[x].ncols() {
                return Err(Error::DomainMismatch(format!(
                    "fiber at atom {x} is not square ({}x{})",
                    self.blocks[x].nrows(),
                    self.blocks[x].ncols()
                )));
            }
        }
        Ok(())
    }

    /// Eigenvalue multisets of the square fiber blocks plus their essential
    /// range: the union over positive-weight atoms, merged within a relative
    /// tolerance and passed through the (no-op) closure.
    pub fn fiber_spectra(&self) -> Result<SpectraReport> {
        self.require_endomorphism()?;
        let space = self.domain.space();
        let mut per_atom = Vec::with_capacity(space.len());
        for x in 0..space.len() {
            if self.blocks[x].nrows() == self.blocks[x].ncols() {
                per_atom.push(linalg::eigenvalues(&self.blocks[x])?);
            } else {
                per_atom.push(Vec::new());
            }
        }
        let mut union: Vec<Complex64> = Vec::new();
        let mut scale = 0.0f64;
        for x in space.positive_atoms() {
            for ev in &per_atom[x] {
                union.push(*ev);
                scale = scale.max(ev.norm());
            }
        }
        linalg::sort_complex(&mut union);
        let merge = tol::SPECTRUM_MERGE * scale.max(1.0);
        let mut essential: Vec<Complex64> = Vec::new();
        for z in union {
            if essential.last().is_none_or(|w| (z - w).norm() > merge) {
                essential.push(z);
            }
        }
        Ok(SpectraReport {
            per_atom,
            essential_range: closure(essential),
        })
    }

    /// `min_x sigma_min(lambda I - R(x))` over positive-weight atoms, the
    /// reciprocal of the worst fiber resolvent norm at `lambda`. A small
    /// margin at a point outside the essential range is the finite-scale
    /// signature of the non-normal spectral gap phenomenon.
    pub fn resolvent_margin(&self, lambda: Complex64) -> Result<f64> {
        self.require_endomorphism()?;
        Ok(self
            .domain
            .space()
            .positive_atoms()
            .filter(|&x| self.domain.dim_at(x) > 0)
            .map(|x| {
                let k = self.blocks[x].nrows();
                let shifted = CMat::identity(k, k) * lambda - &self.blocks[x];
                linalg::sigma_min(&shifted)
            })
            .fold(f64::INFINITY, f64::min))
    }

    /// Polynomial functional calculus: `h(R)(x) = sum_j coeffs[j] R(x)^j`
    /// per fiber. Works for any endomorphism field.
    pub fn calculus_polynomial(&self, coeffs: &[Complex64]) -> Result<RangeOperator> {
        self.require_endomorphism()?;
        let blocks = self
            .blocks
            .iter()
            .map(|b| linalg::matrix_polynomial(b, coeffs))
            .collect();
        RangeOperator::new(self.domain.clone(), self.domain.clone(), blocks)
    }

    /// Spectral functional calculus for normal fields: `h` is applied to the
    /// eigenvalues through a unitary diagonalization of each fiber.
    /// Indicator functions of Borel sets yield the fiber spectral
    /// projections. Errors with mode-not-applicable on non-normal input.
    pub fn calculus_spectral(
        &self,
        h: impl Fn(Complex64) -> Complex64,
        tol: f64,
    ) -> Result<RangeOperator> {
        self.require_endomorphism()?;
        if !self.classify_flags(tol).normal {
            return Err(Error::ModeNotApplicable(
                "fiber blocks are not normal within the given tolerance".into(),
            ));
        }
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (x, b) in self.blocks.iter().enumerate() {
            if self.domain.space().weight(x) <= 0.0 {
                blocks.push(CMat::zeros(b.nrows(), b.ncols()));
                continue;
            }
            let (eigs, q) = linalg::normal_diagonalize(b, tol)?;
            let k = b.nrows();
            let mut lam = CMat::zeros(k, k);
            for (i, &ev) in eigs.iter().enumerate() {
                lam[(i, i)] = h(ev);
            }
            blocks.push(&q * lam * q.adjoint());
        }
        RangeOperator::new(self.domain.clone(), self.domain.clone(), blocks)
    }

    /// The direct integral of this range operator.
    pub fn direct_integral(&self) -> MIOperator {
        MIOperator {
            op: self.clone(),
            provenance: Provenance::ComposedFromBlocks,
        }
    }
}

/// Outcome of the dimension-function unitary construction.
#[derive(Debug, Clone)]
pub enum MiUnitary {
    /// An MI operator whose fibers map `J(x)` unitarily onto `J'(x)`.
    Unitary(MIOperator),
    /// Dimension functions differ; the first offending atom and its fiber
    /// dimensions.
    Mismatch { atom: usize, dims: (usize, usize) },
}

/// Builds the fiberwise unitary `U(x) = B'(x) B(x)*: J(x) -> J'(x)` when the
/// dimension functions agree on every positive-weight atom.
pub fn mi_unitary(j: &RangeFunction, j2: &RangeFunction) -> Result<MiUnitary> {
    if j.space() != j2.space() {
        return Err(Error::DomainMismatch("range functions live on different spaces".into()));
    }
    for x in j.space().positive_atoms() {
        if j.dim_at(x) != j2.dim_at(x) {
            return Ok(MiUnitary::Mismatch {
                atom: x,
                dims: (j.dim_at(x), j2.dim_at(x)),
            });
        }
    }
    // In the stored bases the basis-to-basis unitary is the identity block.
    let blocks = (0..j.space().len())
        .map(|x| {
            let k = j.dim_at(x).min(j2.dim_at(x));
            let mut b = CMat::zeros(j2.dim_at(x), j.dim_at(x));
            for i in 0..k {
                b[(i, i)] = Complex64::new(1.0, 0.0);
            }
            b
        })
        .collect();
    let op = RangeOperator::new(j.clone(), j2.clone(), blocks)?;
    Ok(MiUnitary::Unitary(op.direct_integral()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ComposedFromBlocks,
    DecomposedFromMatrix,
}

/// A multiplication-invariant operator between `V_J` and `V_J'`, carried by
/// its range operator.
#[derive(Debug, Clone)]
pub struct MIOperator {
    op: RangeOperator,
    provenance: Provenance,
}

impl MIOperator {
    pub fn range_operator(&self) -> &RangeOperator {
        &self.op
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// The dense matrix on `L2(X; C^d) -> L2(X; C^d')` in per-atom
    /// coordinates: block diagonal with `B'(x) R(x) B(x)*` at `(x, x)`,
    /// extended by zero on the complement of `V_J`.
    pub fn ambient_matrix(&self) -> CMat {
        let space = self.op.domain.space();
        let (d_in, d_out) = (self.op.domain.ambient_dim(), self.op.codomain.ambient_dim());
        let n = space.len();
        let mut m = CMat::zeros(n * d_out, n * d_in);
        for x in 0..n {
            let blk = self.op.ambient_block(x);
            m.view_mut((x * d_out, x * d_in), (d_out, d_in)).copy_from(&blk);
        }
        m
    }

    /// The block matrix on the stacked fibers `(+)_x J(x) -> (+)_x J'(x)`.
    pub fn assembled_blocks(&self) -> CMat {
        let space = self.op.domain.space();
        let rows: usize = (0..space.len()).map(|x| self.op.codomain.dim_at(x)).sum();
        let cols: usize = (0..space.len()).map(|x| self.op.domain.dim_at(x)).sum();
        let mut m = CMat::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for x in 0..space.len() {
            let b = self.op.block_at(x);
            m.view_mut((r0, c0), (b.nrows(), b.ncols())).copy_from(b);
            r0 += b.nrows();
            c0 += b.ncols();
        }
        m
    }

    pub fn apply(&self, phi: &VectorField) -> Result<VectorField> {
        self.op.apply(phi)
    }

    /// Worst commutator norm `max_g ||[T, M_g]||_F` of the ambient matrix
    /// over indicator multipliers. Zero by construction for operators built
    /// from blocks; exposed so the invariant can be asserted.
    pub fn commutation_residual(&self) -> f64 {
        let space = self.op.domain.space();
        commutator_residual(
            &self.ambient_matrix(),
            space,
            self.op.domain.ambient_dim(),
            self.op.codomain.ambient_dim(),
        )
        .1
    }
}

/// Maximal indicator-commutator norm of a dense per-atom-coordinate matrix,
/// together with the worst off-diagonal atom pair. For `g = chi_y`,
/// `||[T, M_g]||_F^2 = sum_{x != y} ||T(x,y)||^2 + ||T(y,x)||^2`; only
/// positive-weight atoms participate.
pub fn commutator_residual(
    t: &CMat,
    space: &MeasureSpace,
    d_in: usize,
    d_out: usize,
) -> ((usize, usize), f64) {
    let positive: Vec<usize> = space.positive_atoms().collect();
    let mut worst_pair = (0usize, 0usize);
    let mut worst_block = 0.0f64;
    let mut worst_commutator = 0.0f64;
    for &y in &positive {
        let mut sq = 0.0f64;
        for &x in &positive {
            if x == y {
                continue;
            }
            let into = t.view((x * d_out, y * d_in), (d_out, d_in)).norm();
            let from = t.view((y * d_out, x * d_in), (d_out, d_in)).norm();
            sq += into * into + from * from;
            if into > worst_block {
                worst_block = into;
                worst_pair = (x, y);
            }
            if from > worst_block {
                worst_block = from;
                worst_pair = (y, x);
            }
        }
        worst_commutator = worst_commutator.max(sq.sqrt());
    }
    (worst_pair, worst_commutator)
}

/// The direct integral of a range operator (free-function form).
pub fn direct_integral(r: &RangeOperator) -> MIOperator {
    r.direct_integral()
}

/// Extract the range operator of a dense matrix `T` on `L2(X; C^d)` in
/// per-atom coordinates, verifying multiplication invariance first.
///
/// The commutator `||T M_g - M_g T||_F` is checked for `g` running over the
/// indicator functions of positive-weight atoms; the worst off-diagonal
/// block and the worst range leak `||(I - P'(x)) T(x, x) P(x)||_F` must both
/// be at most `tol`. Fiber blocks are the compressions `B'(x)* T(x,x) B(x)`.
pub fn decompose(
    t: &CMat,
    j: &RangeFunction,
    j2: &RangeFunction,
    tol: f64,
) -> Result<RangeOperator> {
    if j.space() != j2.space() {
        return Err(Error::DomainMismatch("range functions live on different spaces".into()));
    }
    let space = j.space();
    let (d_in, d_out) = (j.ambient_dim(), j2.ambient_dim());
    let n = space.len();
    if t.nrows() != n * d_out || t.ncols() != n * d_in {
        return Err(Error::InvalidInput(format!(
            "matrix is {}x{}, expected {}x{}",
            t.nrows(),
            t.ncols(),
            n * d_out,
            n * d_in
        )));
    }
    let ((row, col), residual) = commutator_residual(t, space, d_in, d_out);
    if residual > tol {
        return Err(Error::NotMultiplicationInvariant { row, col, residual });
    }
    // diagonal blocks must map J(x) into J'(x)
    let mut blocks = Vec::with_capacity(n);
    for x in 0..n {
        let diag = t.view((x * d_out, x * d_in), (d_out, d_in)).into_owned();
        if space.weight(x) > 0.0 {
            let into = &diag * j.basis_at(x);
            let leak = (&into - j2.basis_at(x) * (j2.basis_at(x).adjoint() * &into)).norm();
            if leak > tol {
                return Err(Error::RangeLeak { atom: x, residual: leak });
            }
        }
        blocks.push(j2.basis_at(x).adjoint() * diag * j.basis_at(x));
    }
    RangeOperator::new(j.clone(), j2.clone(), blocks)
}

/// [`decompose`] wrapped as an [`MIOperator`] with matrix provenance.
pub fn decompose_mi(t: &CMat, j: &RangeFunction, j2: &RangeFunction, tol: f64) -> Result<MIOperator> {
    Ok(MIOperator {
        op: decompose(t, j, j2, tol)?,
        provenance: Provenance::DecomposedFromMatrix,
    })
}
