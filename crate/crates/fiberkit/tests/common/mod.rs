//! Shared helpers and independent oracles for the integration suites.
//! (Each test binary compiles its own copy, so not every helper is used
//! everywhere.)
#![allow(dead_code)]

//! Oracles deliberately avoid the library code paths they check: dense
//! matrices are assembled and factored globally, ranks come from pivoted
//! elimination, and synthesized systems are enumerated literally.

use fiberkit::{CMatrix, CVector, Complex64};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fiberkit::frames::GeneratorSystem;
use fiberkit::space::{DeterminingSet, MeasureSpace, VectorField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cx(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| cx(rng))
}

pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    random_matrix(rng, n, n).qr().q()
}

/// Random positive weights, occasionally with a zero-weight atom thrown in.
pub fn random_space(rng: &mut ChaCha8Rng, atoms: usize) -> MeasureSpace {
    let weights: Vec<f64> = (0..atoms)
        .map(|_| {
            if rng.gen_bool(0.15) {
                0.0
            } else {
                rng.gen_range(0.2..2.0)
            }
        })
        .collect();
    let weights = if weights.iter().all(|&w| w == 0.0) {
        vec![1.0; atoms]
    } else {
        weights
    };
    MeasureSpace::new((0..atoms).map(|i| i.to_string()).collect(), weights).unwrap()
}

pub fn random_field(rng: &mut ChaCha8Rng, space: &MeasureSpace, dim: usize) -> VectorField {
    VectorField::new(
        space.clone(),
        dim,
        (0..space.len())
            .map(|_| CVector::from_fn(dim, |_, _| cx(rng)))
            .collect(),
    )
    .unwrap()
}

/// A random Parseval determining set for a weighted space: rows derive from
/// the leading columns of a random unitary.
pub fn random_parseval_determining(
    rng: &mut ChaCha8Rng,
    space: &MeasureSpace,
    extra_rows: usize,
) -> DeterminingSet {
    let positive: Vec<usize> = space.positive_atoms().collect();
    let y = positive.len() + extra_rows;
    let q = random_unitary(rng, y);
    let rows: Vec<Vec<Complex64>> = (0..y)
        .map(|t| {
            let mut row = vec![Complex64::new(0.0, 0.0); space.len()];
            for (j, &x) in positive.iter().enumerate() {
                row[x] = q[(t, j)].conj() / space.weight(x).sqrt();
            }
            row
        })
        .collect();
    DeterminingSet::new(space.clone(), MeasureSpace::counting(y), rows).unwrap()
}

pub fn random_system(
    rng: &mut ChaCha8Rng,
    space: &MeasureSpace,
    dim: usize,
    count: usize,
    extra_rows: usize,
) -> GeneratorSystem {
    let generators = (0..count).map(|_| random_field(rng, space, dim)).collect();
    let determining = random_parseval_determining(rng, space, extra_rows);
    GeneratorSystem::new(generators, determining).unwrap()
}

/// The synthesized family `{sqrt(nu_t) W M_{g_t} phi_i}` as columns of a
/// dense matrix in the weighted coordinates `W phi = (sqrt(mu_x) phi(x))_x`.
pub fn synthesized_family(a: &GeneratorSystem) -> CMatrix {
    let space = a.space();
    let d = a.dim();
    let rows = space.len() * d;
    let y = a.determining().index_space().len();
    let cols = y * a.index_size();
    let mut m = CMatrix::zeros(rows, cols);
    for t in 0..y {
        let nu = a.determining().index_space().weight(t);
        for (i, phi) in a.generators().iter().enumerate() {
            let gphi = fiberkit::space::multiply(a.determining().row(t), phi).unwrap();
            for x in 0..space.len() {
                let w = (space.weight(x) * nu).sqrt();
                for c in 0..d {
                    m[(x * d + c, t * a.index_size() + i)] = gphi.value(x)[c] * w;
                }
            }
        }
    }
    m
}

/// Nonzero eigenvalue extremes of the dense frame operator of `E(A)`,
/// with the rank determined independently from the synthesized family.
pub fn dense_frame_bounds(a: &GeneratorSystem) -> Option<(f64, f64)> {
    let fam = synthesized_family(a);
    let rank = elimination_rank(&fam, 1e-10 * operator_norm(&fam).max(1e-300));
    if rank == 0 {
        return None;
    }
    let s = &fam * fam.adjoint();
    let mut eigs = s
        .clone()
        .try_symmetric_eigen(1e-13, 4096)
        .expect("dense eigensolve")
        .eigenvalues
        .iter()
        .cloned()
        .collect::<Vec<f64>>();
    eigs.sort_by(f64::total_cmp);
    let top = &eigs[eigs.len() - rank..];
    Some((top[0], top[rank - 1]))
}

pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        0.0
    } else {
        m.singular_values().max()
    }
}

/// Pivoted Gaussian elimination rank, independent of SVD machinery.
pub fn elimination_rank(m: &CMatrix, tol: f64) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let (piv, best) = (rank..rows)
            .map(|r| (r, a[(r, col)].norm()))
            .fold((rank, 0.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if best <= tol {
            continue;
        }
        a.swap_rows(rank, piv);
        for r in (rank + 1)..rows {
            let f = a[(r, col)] / a[(rank, col)];
            for cc in col..cols {
                let sub = f * a[(rank, cc)];
                a[(r, cc)] -= sub;
            }
        }
        rank += 1;
    }
    rank
}

/// Hausdorff distance between two finite point sets in C.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let one_way = |p: &[Complex64], q: &[Complex64]| {
        p.iter()
            .map(|z| {
                q.iter()
                    .map(|w| (z - w).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0f64, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Dense eigenvalues of a square complex matrix through the library's Schur
/// path applied to the whole matrix (no block knowledge).
pub fn dense_eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    let schur = m
        .clone()
        .try_schur(1e-13, 8192)
        .expect("dense Schur");
    let (_, t) = schur.unpack();
    (0..n).map(|i| t[(i, i)]).collect()
}
