use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fiberkit::frames;
use fiberkit::group::{FiniteGroupTable, SubgroupEmbedding};
use fiberkit::range::RangeFunction;
use fiberkit::space::{DeterminingSet, MeasureSpace, VectorField};
use fiberkit::zak::TransversalDecomposition;
use fiberkit::{CMatrix, CVector, Complex64};

fn cx(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_system(
    rng: &mut ChaCha8Rng,
    atoms: usize,
    dim: usize,
    count: usize,
) -> frames::GeneratorSystem {
    let space = MeasureSpace::counting(atoms);
    let generators: Vec<VectorField> = (0..count)
        .map(|_| {
            VectorField::new(
                space.clone(),
                dim,
                (0..atoms)
                    .map(|_| CVector::from_fn(dim, |_, _| cx(rng)))
                    .collect(),
            )
            .unwrap()
        })
        .collect();
    frames::GeneratorSystem::new(generators, DeterminingSet::standard(space).unwrap()).unwrap()
}

fn bench_zak(c: &mut Criterion) {
    let d24 = FiniteGroupTable::dihedral(24); // order 48
    let rot = SubgroupEmbedding::cyclic_witness(d24.clone(), 1).unwrap();
    let dec = TransversalDecomposition::new(d24, rot, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f: Vec<Complex64> = (0..48).map(|_| cx(&mut rng)).collect();
    c.bench_function("zak_transform_d24", |b| {
        b.iter(|| dec.zak_transform(black_box(&f)).unwrap())
    });
    c.bench_function("ti_frame_test_d24", |b| {
        let gens = vec![f.clone()];
        b.iter(|| dec.ti_frame_test(black_box(&gens), 1e-9).unwrap())
    });
}

fn bench_frames(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let system = random_system(&mut rng, 32, 6, 4);
    c.bench_function("frame_bounds_32x6x4", |b| {
        b.iter(|| frames::frame_bounds(black_box(&system), 1e-9).unwrap())
    });
    c.bench_function("canonical_tight_32x6x4", |b| {
        b.iter(|| frames::canonical_tight(black_box(&system)).unwrap())
    });
    c.bench_function("pointwise_gramian_par_32x6x4", |b| {
        b.iter(|| frames::pointwise_gramian_par(black_box(&system)).unwrap())
    });
}

fn bench_calculus(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let atoms = 16;
    let dim = 6;
    let space = MeasureSpace::counting(atoms);
    let j = RangeFunction::full(space, dim);
    let blocks: Vec<CMatrix> = (0..atoms)
        .map(|_| {
            let q = CMatrix::from_fn(dim, dim, |_, _| cx(&mut rng)).qr().q();
            let mut lam = CMatrix::zeros(dim, dim);
            for i in 0..dim {
                lam[(i, i)] = cx(&mut rng);
            }
            &q * lam * q.adjoint()
        })
        .collect();
    let op = fiberkit::RangeOperator::new(j.clone(), j, blocks).unwrap();
    c.bench_function("spectral_calculus_exp_16x6", |b| {
        b.iter(|| op.calculus_spectral(|z| z.exp(), 1e-9).unwrap())
    });
    c.bench_function("fiber_spectra_16x6", |b| {
        b.iter(|| op.fiber_spectra().unwrap())
    });
}

criterion_group!(benches, bench_zak, bench_frames, bench_calculus);
criterion_main!(benches);
