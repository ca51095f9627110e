// Independent reference computations checked against the engine.

use std::collections::BTreeSet;

use bessel_core::algebra::{StarAlgebra, TraceFunctional};
use bessel_core::gabor::{bessel_bound_opt, bessel_bound_svd, tf_shift, Window};
use bessel_core::groups::{
    adjoint_lattice, covolume, enumerate_subgroups, lattice_from_generators, FiniteAbelianGroup, Lattice, PhasePoint,
    PhaseSpace,
};
use bessel_core::linalg::{c, CMat, CVec};
use bessel_core::rng::rng_from_seed;
use bessel_core::vnmod::{cdim, cdim_block_formula, Inclusion, RightModule};
use num_complex::Complex64;

fn space(n: u64) -> PhaseSpace {
    PhaseSpace::new(FiniteAbelianGroup::cyclic(n).unwrap())
}

/// `π(x, ω)` on `C^n`, written out from the definition.
fn shift(n: u64, x: u64, w: u64) -> CMat {
    let n_us = n as usize;
    let mut m = CMat::zeros(n_us, n_us);
    for t in 0..n {
        let phase = 2.0 * std::f64::consts::PI * ((w * t) % n) as f64 / n as f64;
        m[(t as usize, ((t + n - x) % n) as usize)] = Complex64::from_polar(1.0, phase);
    }
    m
}

fn commute(n: u64, a: (u64, u64), b: (u64, u64)) -> bool {
    let p = shift(n, a.0, a.1);
    let q = shift(n, b.0, b.1);
    (&p * &q - &q * &p).norm() < 1e-9
}

fn pairs(l: &Lattice) -> BTreeSet<(u64, u64)> {
    l.elements().iter().map(|z| (z.x[0], z.omega[0])).collect()
}

/// Every subgroup of `Z_n × Z_n`, as the closures of all pairs of elements.
fn brute_force_subgroups(n: u64) -> BTreeSet<BTreeSet<(u64, u64)>> {
    let elems: Vec<(u64, u64)> = (0..n).flat_map(|x| (0..n).map(move |w| (x, w))).collect();
    let mut out = BTreeSet::new();
    for &a in &elems {
        for &b in &elems {
            let mut set = BTreeSet::new();
            for i in 0..n {
                for j in 0..n {
                    set.insert(((i * a.0 + j * b.0) % n, (i * a.1 + j * b.1) % n));
                }
            }
            out.insert(set);
        }
    }
    out
}

#[test]
fn subgroup_enumeration_matches_brute_force() {
    for n in 2..=8 {
        let found: BTreeSet<_> = enumerate_subgroups(&space(n), 1000).unwrap().iter().map(pairs).collect();
        assert_eq!(found, brute_force_subgroups(n), "Z_{n}");
    }
}

#[test]
fn known_subgroup_counts() {
    let counts: Vec<usize> = (2..=7).map(|n| enumerate_subgroups(&space(n), 1000).unwrap().len()).collect();
    assert_eq!(counts, vec![5, 6, 15, 8, 30, 10]);
}

#[test]
fn adjoint_lattice_matches_matrix_commutation() {
    for n in [2u64, 4, 6] {
        for l in enumerate_subgroups(&space(n), 1000).unwrap() {
            let members = pairs(&l);
            let expected: BTreeSet<(u64, u64)> = (0..n)
                .flat_map(|x| (0..n).map(move |w| (x, w)))
                .filter(|&w| members.iter().all(|&z| commute(n, z, w)))
                .collect();
            assert_eq!(pairs(&adjoint_lattice(&l)), expected);
        }
    }
}

#[test]
fn tf_shift_matches_the_definition() {
    let g = FiniteAbelianGroup::cyclic(5).unwrap();
    for x in 0..5 {
        for w in 0..5 {
            let engine = tf_shift(&g, &PhasePoint::new(vec![x], vec![w])).unwrap();
            assert!((engine - shift(5, x, w)).norm() < 1e-12);
        }
    }
}

#[test]
fn covolume_is_group_order_over_lattice_size() {
    for n in 2..=6u64 {
        for l in enumerate_subgroups(&space(n), 1000).unwrap() {
            let cv = covolume(&l);
            assert_eq!(*cv.numer() * l.size() as u64, n * *cv.denom());
        }
    }
}

/// Largest eigenvalue of the frame operator by power iteration.
fn frame_bound_power(g: &CVec, n: u64, lattice: &BTreeSet<(u64, u64)>) -> f64 {
    let atoms: Vec<CVec> = lattice.iter().map(|&(x, w)| shift(n, x, w) * g).collect();
    let apply = |v: &CVec| atoms.iter().fold(CVec::zeros(v.len()), |acc, a| acc + a * a.dotc(v));
    let mut v = CVec::from_element(g.len(), c(1.0, 0.3));
    let mut lambda = 0.0;
    for _ in 0..2000 {
        let w = apply(&v);
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = norm / v.norm();
        v = w / c(norm, 0.0);
    }
    lambda
}

#[test]
fn bessel_bounds_match_power_iteration() {
    let mut rng = rng_from_seed(11);
    for n in [3u64, 4] {
        let g = FiniteAbelianGroup::cyclic(n).unwrap();
        for l in enumerate_subgroups(&space(n), 1000).unwrap() {
            let w = Window::gaussian(g.clone(), &mut rng);
            let oracle = frame_bound_power(w.values(), n, &pairs(&l));
            let b = bessel_bound_opt(&w, &l).unwrap();
            assert!((b - oracle).abs() <= 1e-7 * oracle.max(1.0), "{b} vs {oracle}");
            assert!((b - bessel_bound_svd(&w, &l).unwrap()).abs() <= 1e-9 * b.max(1.0));
        }
    }
}

#[test]
fn bessel_bound_of_delta_on_reference_lattices() {
    let s = space(4);
    let g = Window::delta0(s.group().clone());
    let full =
        lattice_from_generators(&s, &[PhasePoint::new(vec![1], vec![0]), PhasePoint::new(vec![0], vec![1])]).unwrap();
    assert!((bessel_bound_opt(&g, &full).unwrap() - 4.0).abs() < 1e-12);
    assert!((bessel_bound_opt(&g, &adjoint_lattice(&full)).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn cdim_examples() {
    // C² over M_2 acting by right multiplication on row vectors.
    let m2 = StarAlgebra::full(2);
    let h = RightModule::from_transpose(m2.clone(), TraceFunctional::matrix_trace(&m2));
    assert!((cdim(&h).unwrap().coefficients()[0] - 0.5).abs() < 1e-9);

    // L²(M_4, Tr) over M_2 ⊗ 1 has dimension 16 / 4.
    let m4 = StarAlgebra::full(4);
    let std4 = RightModule::standard(m4.clone(), TraceFunctional::matrix_trace(&m4)).unwrap();
    let over = std4.restrict(&StarAlgebra::full(2).tensor_identity(2)).unwrap();
    let d = cdim(&over).unwrap();
    assert_eq!(d.coefficients().len(), 1);
    assert!((d.coefficients()[0] - 4.0).abs() < 1e-9);
    assert!(d.max_difference(&cdim_block_formula(&over).unwrap()) < 1e-9);
}

#[test]
fn tensor_factor_inclusion_has_constant_four() {
    let big = StarAlgebra::full(4);
    let t = TraceFunctional::matrix_trace(&big);
    let inc = Inclusion::new(big, StarAlgebra::full(2).tensor_identity(2), t).unwrap();
    let bound = inc.subalgebra_bound().unwrap();
    assert!((bound.constant() - 4.0).abs() < 1e-9);
}
