//! Zak transform for a finite group with a distinguished abelian subgroup,
//! fiberization for abelian ambient groups, and the reduction of
//! translation-invariant (TI) spaces and operators to fibers over the dual.
//!
//! The data is a triple `(G_big, G, Delta)`: a Cayley-table group, an
//! abelian subgroup with an explicit product-of-cyclics witness, and a
//! right-coset transversal. Counting measure on the pieces makes the Weil
//! identity `sum_Gbig f = sum_Delta sum_G f(x y)` exact, and
//!
//! ```text
//! (Z f)(alpha)[y] = sum_{x in G} f(x y) conj(alpha(x))
//! ```
//!
//! is unitary from `l2(G_big)` onto `L2(Ghat, 1/|G|; C^Delta)`. Left
//! translation by `x in G` becomes multiplication by
//! `x^(alpha) = conj(alpha(x))`, so TI questions delegate to the
//! multiplication-invariant machinery of [`crate::range`] and
//! [`crate::frames`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frames::{self, FrameReport, GeneratorSystem};
use crate::group::{
    format_tuple, CosetTransversal, FiniteAbelianGroup, FiniteGroupTable, SubgroupEmbedding,
};
use crate::linalg::{CMat, CVec};
use crate::range::{self, RangeFunction, RangeOperator};
use crate::space::{DeterminingSet, MeasureSpace, VectorField};

/// The `(G_big, G, Delta)` data of a Zak transform.
#[derive(Debug, Clone)]
pub struct TransversalDecomposition {
    big: FiniteGroupTable,
    sub: SubgroupEmbedding,
    transversal: CosetTransversal,
    dual_space: MeasureSpace,
}

/// A Zak-transformed function: one vector in `C^Delta` per character.
#[derive(Debug, Clone)]
pub struct ZakField {
    field: VectorField,
}

impl ZakField {
    pub fn field(&self) -> &VectorField {
        &self.field
    }

    pub fn into_field(self) -> VectorField {
        self.field
    }

    /// `(Z f)(alpha)` as a vector over the transversal.
    pub fn value(&self, alpha: usize) -> &CVec {
        self.field.value(alpha)
    }

    /// Norm in `L2(Ghat, 1/|G|; C^Delta)`.
    pub fn norm(&self) -> f64 {
        self.field.norm()
    }
}

/// Outcome of the TI isomorphism classification.
#[derive(Debug, Clone)]
pub enum TiIsomorphism {
    /// Dimension functions agree; an explicit G-TI unitary mapping the
    /// first space onto the second (zero on the orthogonal complement),
    /// as a dense matrix on `l2(G_big)`.
    Isomorphic { unitary: CMat },
    /// First dual atom where the dimension functions differ.
    Mismatch { atom: usize, dims: (usize, usize) },
}

impl TransversalDecomposition {
    /// Build the decomposition; the subgroup must carry an abelian witness.
    /// When no transversal is supplied the canonical smallest-index one is
    /// used. The Weil bijection `G x Delta -> G_big` is validated.
    pub fn new(
        big: FiniteGroupTable,
        sub: SubgroupEmbedding,
        transversal: Option<CosetTransversal>,
    ) -> Result<Self> {
        // dense linear algebra budget: nonabelian ambient groups are capped
        if big.order() > 200 && !big.is_abelian() {
            return Err(Error::InvalidInput(format!(
                "nonabelian ambient groups are supported up to order 200, got {}",
                big.order()
            )));
        }
        if sub.parent() != &big {
            return Err(Error::InvalidSubgroup("subgroup has a different parent table".into()));
        }
        let witness = sub
            .witness()
            .ok_or_else(|| Error::InvalidSubgroup("an abelian witness is required".into()))?;
        let transversal = match transversal {
            Some(t) => CosetTransversal::new(&sub, t.reps().to_vec())?,
            None => CosetTransversal::canonical(&sub),
        };
        let dual_space = witness.model.dual_space();
        Ok(Self {
            big,
            sub,
            transversal,
            dual_space,
        })
    }

    pub fn big(&self) -> &FiniteGroupTable {
        &self.big
    }

    pub fn sub(&self) -> &SubgroupEmbedding {
        &self.sub
    }

    pub fn transversal(&self) -> &CosetTransversal {
        &self.transversal
    }

    /// The dual of the abelian model, atoms of mass `1/|G|`.
    pub fn dual_space(&self) -> &MeasureSpace {
        &self.dual_space
    }

    fn model(&self) -> &FiniteAbelianGroup {
        &self.sub.witness().expect("witness checked at construction").model
    }

    fn witness_map(&self) -> &[usize] {
        &self.sub.witness().expect("witness checked at construction").map
    }

    pub fn sub_order(&self) -> usize {
        self.sub.order()
    }

    pub fn delta_len(&self) -> usize {
        self.transversal.len()
    }

    fn check_function(&self, f: &[Complex64]) -> Result<()> {
        if f.len() != self.big.order() {
            return Err(Error::InvalidInput(format!(
                "function has length {}, the group order is {}",
                f.len(),
                self.big.order()
            )));
        }
        Ok(())
    }

    /// `(Z f)(alpha)[y] = sum_a f(phi(a) y) conj(chi_alpha(a))`.
    pub fn zak_transform(&self, f: &[Complex64]) -> Result<ZakField> {
        self.check_function(f)?;
        let model = self.model();
        let map = self.witness_map();
        let reps = self.transversal.reps();
        let values: Vec<CVec> = (0..model.order())
            .map(|alpha| {
                CVec::from_fn(reps.len(), |j, _| {
                    (0..model.order())
                        .map(|a| {
                            f[self.big.mul(map[a], reps[j])] * model.character(alpha, a).conj()
                        })
                        .sum()
                })
            })
            .collect();
        Ok(ZakField {
            field: VectorField::new(self.dual_space.clone(), reps.len(), values)?,
        })
    }

    /// Inverse transform: `f(phi(a) y) = (1/|G|) sum_alpha (Zf)(alpha)[y] chi_alpha(a)`.
    pub fn zak_inverse(&self, z: &ZakField) -> Result<Vec<Complex64>> {
        let model = self.model();
        let map = self.witness_map();
        let reps = self.transversal.reps();
        if z.field.dim() != reps.len() || z.field.space() != &self.dual_space {
            return Err(Error::DomainMismatch("field does not match this decomposition".into()));
        }
        let scale = 1.0 / model.order() as f64;
        let mut f = vec![Complex64::new(0.0, 0.0); self.big.order()];
        for a in 0..model.order() {
            for (j, &y) in reps.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for alpha in 0..model.order() {
                    acc += z.value(alpha)[j] * model.character(alpha, a);
                }
                f[self.big.mul(map[a], y)] = acc * scale;
            }
        }
        Ok(f)
    }

    /// Left translation `(L_x f)(z) = f(x^-1 z)` by any parent element.
    pub fn translate(&self, x: usize, f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_function(f)?;
        if x >= self.big.order() {
            return Err(Error::InvalidElement("translation element out of range".into()));
        }
        let xinv = self.big.inv(x);
        Ok((0..self.big.order())
            .map(|z| f[self.big.mul(xinv, z)])
            .collect())
    }

    /// The model-dual multiplier of `x`: `alpha -> conj(chi_alpha(a_x))`
    /// where `phi(a_x) = x`. Errors when `x` is not in the subgroup.
    pub fn dual_multiplier(&self, x: usize) -> Result<Vec<Complex64>> {
        let model = self.model();
        let a_x = self
            .witness_map()
            .iter()
            .position(|&p| p == x)
            .ok_or_else(|| Error::InvalidElement(format!("element {x} is not in the subgroup")))?;
        Ok((0..model.order())
            .map(|alpha| model.character(alpha, a_x).conj())
            .collect())
    }

    /// `max_f ||Z(L_x f) - M_(x^) Z f||` over `trials` seeded random
    /// functions; zero up to roundoff for every subgroup element.
    pub fn zak_intertwining_residual(&self, x: usize, trials: usize, seed: u64) -> Result<f64> {
        let multiplier = self.dual_multiplier(x)?;
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        let mut worst = 0.0f64;
        for _ in 0..trials.max(1) {
            let f: Vec<Complex64> = (0..self.big.order())
                .map(|_| Complex64::new(next(), next()))
                .collect();
            let lhs = self.zak_transform(&self.translate(x, &f)?)?;
            let zf = self.zak_transform(&f)?;
            let rhs = crate::space::multiply(&multiplier, zf.field())?;
            let diff = lhs.field().add(&rhs.scale(Complex64::new(-1.0, 0.0)));
            worst = worst.max(diff.norm());
        }
        Ok(worst)
    }

    /// The Zak matrix `C^Gbig -> C^(Ghat x Delta)` in value coordinates,
    /// rows ordered `(alpha, j)` with `j` fastest.
    pub fn zak_matrix(&self) -> CMat {
        let model = self.model();
        let map = self.witness_map();
        let reps = self.transversal.reps();
        let d = reps.len();
        let mut z = CMat::zeros(model.order() * d, self.big.order());
        for alpha in 0..model.order() {
            for (j, &y) in reps.iter().enumerate() {
                for a in 0..model.order() {
                    z[(alpha * d + j, self.big.mul(map[a], y))] += model.character(alpha, a).conj();
                }
            }
        }
        z
    }

    fn zak_inverse_matrix(&self) -> CMat {
        let model = self.model();
        let map = self.witness_map();
        let reps = self.transversal.reps();
        let d = reps.len();
        let scale = Complex64::new(1.0 / model.order() as f64, 0.0);
        let mut z = CMat::zeros(self.big.order(), model.order() * d);
        for a in 0..model.order() {
            for (j, &y) in reps.iter().enumerate() {
                for alpha in 0..model.order() {
                    z[(self.big.mul(map[a], y), alpha * d + j)] +=
                        model.character(alpha, a) * scale;
                }
            }
        }
        z
    }

    /// Range function of the TI space generated by `gens` under
    /// G-translation: fibers `J(alpha) = span{(Z f_i)(alpha)}`.
    pub fn ti_range_function(
        &self,
        gens: &[Vec<Complex64>],
        threshold: Option<f64>,
    ) -> Result<RangeFunction> {
        if gens.is_empty() {
            return Ok(RangeFunction::trivial(self.dual_space.clone(), self.delta_len()));
        }
        let fields = gens
            .iter()
            .map(|f| Ok(self.zak_transform(f)?.into_field()))
            .collect::<Result<Vec<_>>>()?;
        RangeFunction::from_generators(&fields, threshold)
    }

    /// The Zak fields of the generators as a generator system over the dual,
    /// with the characters of the model as determining set.
    pub fn ti_generator_system(&self, gens: &[Vec<Complex64>]) -> Result<GeneratorSystem> {
        let fields = gens
            .iter()
            .map(|f| Ok(self.zak_transform(f)?.into_field()))
            .collect::<Result<Vec<_>>>()?;
        GeneratorSystem::new(fields, DeterminingSet::characters(self.model()))
    }

    /// Frame bounds of the translate system `{L_x f_i}` for its span, read
    /// off the Zak fibers.
    pub fn ti_frame_test(&self, gens: &[Vec<Complex64>], tol: f64) -> Result<FrameReport> {
        if gens.is_empty() {
            return Ok(FrameReport::empty());
        }
        for f in gens {
            self.check_function(f)?;
        }
        if gens
            .iter()
            .all(|f| f.iter().all(|v| v.norm_sqr() == 0.0))
        {
            return Ok(FrameReport::empty());
        }
        frames::frame_bounds(&self.ti_generator_system(gens)?, tol)
    }

    /// Commutation residual of a dense matrix on `l2(G_big)` against left
    /// translation by every subgroup element, with the worst element.
    pub fn translation_residual(&self, t: &CMat) -> Result<(usize, f64)> {
        let n = self.big.order();
        if t.nrows() != n || t.ncols() != n {
            return Err(Error::InvalidInput(format!("matrix must be {n}x{n}")));
        }
        let mut worst = (0usize, 0.0f64);
        for &x in self.sub.elements() {
            let mut lx = CMat::zeros(n, n);
            let xinv = self.big.inv(x);
            for z in 0..n {
                lx[(z, self.big.mul(xinv, z))] = Complex64::new(1.0, 0.0);
            }
            let residual = (t * &lx - &lx * t).norm();
            if residual > worst.1 {
                worst = (x, residual);
            }
        }
        Ok(worst)
    }

    /// Decompose a translation-invariant operator: conjugate by the Zak
    /// transform and extract the fiber blocks over the dual.
    pub fn ti_operator_decompose(&self, t: &CMat, tol: f64) -> Result<RangeOperator> {
        let (element, residual) = self.translation_residual(t)?;
        if residual > tol {
            return Err(Error::NotTranslationInvariant { element, residual });
        }
        let tz = self.zak_matrix() * t * self.zak_inverse_matrix();
        let full = RangeFunction::full(self.dual_space.clone(), self.delta_len());
        range::decompose(&tz, &full, &full, tol.max(residual * 8.0).max(1e-9))
    }

    /// TI isomorphism classification of the spaces generated by two
    /// families: equal dimension functions produce an explicit G-TI partial
    /// isometry carrying the first space onto the second.
    pub fn ti_isomorphic(
        &self,
        gens_a: &[Vec<Complex64>],
        gens_b: &[Vec<Complex64>],
        threshold: Option<f64>,
    ) -> Result<TiIsomorphism> {
        let ja = self.ti_range_function(gens_a, threshold)?;
        let jb = self.ti_range_function(gens_b, threshold)?;
        match range::mi_unitary(&ja, &jb)? {
            range::MiUnitary::Mismatch { atom, dims } => Ok(TiIsomorphism::Mismatch { atom, dims }),
            range::MiUnitary::Unitary(mi) => {
                let unitary =
                    self.zak_inverse_matrix() * mi.ambient_matrix() * self.zak_matrix();
                Ok(TiIsomorphism::Isomorphic { unitary })
            }
        }
    }
}

/// Fiberization data for an abelian ambient group: the annihilator
/// `G* = {gamma : gamma|_G = 1}` and the canonical section `Omega` of
/// `Ghat_big / G*`.
///
/// With counting measure on `G*` folded into the stored values (a factor
/// `|G*|^(-1/2)`), the map `f -> [alpha -> (fhat(alpha gamma))_gamma]` is
/// unitary onto `L2(Omega, 1/|G|; C^(G*))`, and the characters of `G`
/// restricted to `Omega` form a Parseval determining set there. Fibers are
/// paired with the model dual through the annihilator pairing
/// `Omega ~ Ghat`; see [`section_model_pairing`](Self::section_model_pairing).
#[derive(Debug, Clone)]
pub struct Fiberization {
    big: FiniteAbelianGroup,
    sub_elems: Vec<usize>,
    annihilator: Vec<usize>,
    section: Vec<usize>,
    space: MeasureSpace,
}

impl Fiberization {
    pub fn new(big: FiniteAbelianGroup, sub_elems: &[usize]) -> Result<Self> {
        if !big.is_subgroup(sub_elems) {
            return Err(Error::InvalidSubgroup("fiberization requires a subgroup".into()));
        }
        let mut sub: Vec<usize> = sub_elems.to_vec();
        sub.sort_unstable();
        sub.dedup();
        let annihilator = big.annihilator(&sub)?;
        let section = big.dual_section(&annihilator)?;
        let mass = 1.0 / sub.len() as f64;
        let atoms: Vec<String> = section
            .iter()
            .map(|&a| format_tuple(&big.element(a)))
            .collect();
        let space = MeasureSpace::new(atoms, vec![mass; section.len()])?;
        Ok(Self {
            big,
            sub_elems: sub,
            annihilator,
            section,
            space,
        })
    }

    pub fn annihilator(&self) -> &[usize] {
        &self.annihilator
    }

    pub fn section(&self) -> &[usize] {
        &self.section
    }

    /// The section as a measure space, one atom of mass `1/|G|` per coset
    /// representative.
    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn fiber_dim(&self) -> usize {
        self.annihilator.len()
    }

    /// `(T f)(alpha)[gamma] = fhat(alpha gamma) / sqrt(|G*|)`.
    pub fn fiberize(&self, f: &[Complex64]) -> Result<VectorField> {
        let fhat = self.big.fourier(f)?;
        let scale = Complex64::new(1.0 / (self.annihilator.len() as f64).sqrt(), 0.0);
        let values: Vec<CVec> = self
            .section
            .iter()
            .map(|&alpha| {
                CVec::from_fn(self.annihilator.len(), |g, _| {
                    fhat[self.big.add(alpha, self.annihilator[g])] * scale
                })
            })
            .collect();
        VectorField::new(self.space.clone(), self.annihilator.len(), values)
    }

    /// The characters of the subgroup restricted to the section, a Parseval
    /// determining set for the section space indexed by `G` with counting
    /// measure.
    pub fn determining_set(&self) -> Result<DeterminingSet> {
        let rows: Vec<Vec<Complex64>> = self
            .sub_elems
            .iter()
            .map(|&x| {
                self.section
                    .iter()
                    .map(|&alpha| self.big.character(alpha, x).conj())
                    .collect()
            })
            .collect();
        DeterminingSet::new(
            self.space.clone(),
            MeasureSpace::counting(self.sub_elems.len()),
            rows,
        )
    }

    /// Frame bounds of `{L_x f_i}_{x in G}` via fiberization.
    pub fn frame_test(&self, gens: &[Vec<Complex64>], tol: f64) -> Result<FrameReport> {
        if gens.is_empty()
            || gens
                .iter()
                .all(|f| f.iter().all(|v| v.norm_sqr() == 0.0))
        {
            return Ok(FrameReport::empty());
        }
        let fields = gens
            .iter()
            .map(|f| self.fiberize(f))
            .collect::<Result<Vec<_>>>()?;
        let system = GeneratorSystem::new(fields, self.determining_set()?)?;
        frames::frame_bounds(&system, tol)
    }

    /// Range function over the section.
    pub fn range_function(
        &self,
        gens: &[Vec<Complex64>],
        threshold: Option<f64>,
    ) -> Result<RangeFunction> {
        if gens.is_empty() {
            return Ok(RangeFunction::trivial(self.space.clone(), self.fiber_dim()));
        }
        let fields = gens
            .iter()
            .map(|f| self.fiberize(f))
            .collect::<Result<Vec<_>>>()?;
        RangeFunction::from_generators(&fields, threshold)
    }

    /// The quotient-dual pairing `Omega ~ Ghat`: entry `s` is the model
    /// dual index whose character matches `alpha_s` restricted to the
    /// subgroup, for a decomposition of the same subgroup.
    pub fn section_model_pairing(&self, dec: &TransversalDecomposition) -> Result<Vec<usize>> {
        let model = dec.model();
        let map = dec.witness_map();
        if model.order() != self.sub_elems.len() {
            return Err(Error::DomainMismatch("subgroup orders differ".into()));
        }
        let mut pairing = Vec::with_capacity(self.section.len());
        for &alpha in &self.section {
            let found = (0..model.order()).find(|&a| {
                (0..model.order()).all(|g| {
                    let lhs = model.character(a, g);
                    let rhs = self.big.character(alpha, map[g]);
                    (lhs - rhs).norm() < 1e-9
                })
            });
            pairing.push(found.ok_or_else(|| {
                Error::DomainMismatch("section character does not restrict to the model dual".into())
            })?);
        }
        Ok(pairing)
    }
}
