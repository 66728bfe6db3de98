//! Default numerical tolerances.
//!
//! Every threshold used by the library is defined here with its rationale.
//! All of them can be overridden per call where an operation takes an
//! explicit tolerance argument.

/// Orthonormality defect allowed for the stored bases of a range function:
/// `||B*B - I||_F <= ORTHONORMAL`. Bases come out of one SVD, so the defect
/// is a handful of ulps.
pub const ORTHONORMAL: f64 = 1e-12;

/// Hermitian symmetry defect allowed for Gramian blocks.
pub const HERMITIAN: f64 = 1e-12;

/// Eigenvalues of a nominally PSD block in `[-PSD_CLAMP, 0)` are clamped to
/// zero before taking square roots; anything below `-PSD_CLAMP` (relative to
/// the block norm) is a hard not-PSD error.
pub const PSD_CLAMP: f64 = 1e-10;

/// Default tolerance for the Parseval determining-set test, relative to
/// `||B||^2` of the weighted synthesis matrix.
pub const PARSEVAL: f64 = 1e-9;

/// Default tolerance for multiplication/translation commutator residuals,
/// relative to the operator norm scale.
pub const COMMUTATOR: f64 = 1e-9;

/// Default tolerance for fiberwise operator classification flags
/// (unitary, normal, isometry, partial isometry, injective).
pub const FLAGS: f64 = 1e-9;

/// Default relative cutoff below which a frame lower bound is treated as
/// vanishing, i.e. the system is rejected as a frame.
pub const FRAME_FLOOR: f64 = 1e-12;

/// Spectral points closer than this (relative to the spectral radius scale)
/// are merged when forming the essential range of a fiber spectrum.
pub const SPECTRUM_MERGE: f64 = 1e-9;

/// Relative rank threshold factor. A singular value is treated as zero when
/// `sigma <= max(rows, cols) * f64::EPSILON * sigma_max`, the standard
/// robust rank rule. See [`rank_threshold`].
pub fn rank_threshold(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * sigma_max
}

/// Rank threshold for the fibers of a field over `atoms` atoms, relative to
/// the field-global `sigma_max`. Fiber values typically come out of sums of
/// `O(atoms)` terms (Fourier/Zak synthesis), so the roundoff floor of an
/// exactly-zero fiber grows with the atom count; the plain per-matrix rule
/// would mistake that floor for rank.
pub fn field_rank_threshold(rows: usize, cols: usize, atoms: usize, sigma_max: f64) -> f64 {
    (rows.max(cols) * atoms.max(1)) as f64 * f64::EPSILON * sigma_max
}
