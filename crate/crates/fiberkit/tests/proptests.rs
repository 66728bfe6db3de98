//! Property tests for the structural invariants.

mod common;

use proptest::prelude::*;

use fiberkit::frames;
use fiberkit::group::{FiniteAbelianGroup, FiniteGroupTable, SubgroupEmbedding};
use fiberkit::range::{self, RangeFunction, RangeOperator};
use fiberkit::space::{MeasureSpace, VectorField};
use fiberkit::zak::TransversalDecomposition;
use fiberkit::{CMatrix, CVector, Complex64};

fn complex_strategy() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn function_strategy(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec(complex_strategy(), len)
}

fn factors_strategy() -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::vec(1u64..=5, 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fourier_inversion_round_trips(factors in factors_strategy(), seed in any::<u64>()) {
        let g = FiniteAbelianGroup::new(factors).unwrap();
        let mut s = seed;
        let f: Vec<Complex64> = (0..g.order()).map(|_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let re = ((s >> 33) as f64 / (1u64 << 31) as f64) - 1.0;
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let im = ((s >> 33) as f64 / (1u64 << 31) as f64) - 1.0;
            Complex64::new(re, im)
        }).collect();
        let back = g.inverse_fourier(&g.fourier(&f).unwrap()).unwrap();
        for (a, b) in f.iter().zip(&back) {
            prop_assert!((a - b).norm() < 1e-12);
        }
        // Plancherel with dual mass 1/|G|
        let fhat = g.fourier(&f).unwrap();
        let lhs: f64 = f.iter().map(|z| z.norm_sqr()).sum();
        let rhs: f64 = fhat.iter().map(|z| z.norm_sqr()).sum::<f64>() / g.order() as f64;
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn characters_are_homomorphisms(factors in factors_strategy(), picks in proptest::collection::vec(any::<u32>(), 3)) {
        let g = FiniteAbelianGroup::new(factors).unwrap();
        let a = picks[0] as usize % g.order();
        let x = picks[1] as usize % g.order();
        let y = picks[2] as usize % g.order();
        let lhs = g.character(a, g.add(x, y));
        let rhs = g.character(a, x) * g.character(a, y);
        prop_assert!((lhs - rhs).norm() < 1e-12);
        prop_assert!((g.character(a, x).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zak_unitary_on_dihedral(rotation_order in 2usize..=6, f_seed in any::<u64>()) {
        let d = FiniteGroupTable::dihedral(rotation_order);
        let rot = SubgroupEmbedding::cyclic_witness(d.clone(), 1).unwrap();
        let dec = TransversalDecomposition::new(d, rot, None).unwrap();
        let mut s = f_seed;
        let f: Vec<Complex64> = (0..2 * rotation_order).map(|_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
            let re = ((s >> 33) as f64 / (1u64 << 31) as f64) - 1.0;
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
            let im = ((s >> 33) as f64 / (1u64 << 31) as f64) - 1.0;
            Complex64::new(re, im)
        }).collect();
        let z = dec.zak_transform(&f).unwrap();
        let nf: f64 = f.iter().map(|v| v.norm_sqr()).sum();
        prop_assert!((z.norm().powi(2) - nf).abs() < 1e-10);
        let back = dec.zak_inverse(&z).unwrap();
        for (u, v) in f.iter().zip(&back) {
            prop_assert!((u - v).norm() < 1e-10);
        }
    }

    #[test]
    fn projections_are_idempotent_and_selfadjoint(
        atoms in 1usize..=4,
        dim in 1usize..=4,
        seed in any::<u64>(),
    ) {
        let space = MeasureSpace::counting(atoms);
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        let field = VectorField::new(
            space.clone(),
            dim,
            (0..atoms).map(|_| CVector::from_fn(dim, |_, _| Complex64::new(next(), next()))).collect(),
        ).unwrap();
        let j = RangeFunction::from_generators(&[field], None).unwrap();
        for x in 0..atoms {
            let p = j.projector_at(x);
            prop_assert!((&p * &p - &p).norm() < 1e-12);
            prop_assert!((&p - p.adjoint()).norm() < 1e-12);
        }
    }

    #[test]
    fn decompose_inverts_direct_integral(
        atoms in 1usize..=4,
        dim in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let space = MeasureSpace::counting(atoms);
        let j = RangeFunction::full(space.clone(), dim);
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        let blocks: Vec<CMatrix> = (0..atoms)
            .map(|_| CMatrix::from_fn(dim, dim, |_, _| Complex64::new(next(), next())))
            .collect();
        let op = RangeOperator::new(j.clone(), j.clone(), blocks).unwrap();
        let back = range::decompose(&op.direct_integral().ambient_matrix(), &j, &j, 1e-9).unwrap();
        prop_assert!(back.approx_eq(&op, 1e-12));
    }

    #[test]
    fn realize_then_gramian_is_identity(
        atoms in 1usize..=3,
        count in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let space = MeasureSpace::counting(atoms);
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        let blocks: Vec<CMatrix> = (0..atoms)
            .map(|_| {
                let y = CMatrix::from_fn(count, count, |_, _| Complex64::new(next(), next()));
                &y * y.adjoint()
            })
            .collect();
        let gr = frames::GramianField::new(space, blocks).unwrap();
        let system = frames::realize_from_gramian(&gr, count).unwrap();
        let back = frames::pointwise_gramian(&system).unwrap();
        prop_assert!(back.equal_ae(&gr, 1e-10));
    }
}
