use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use perfcode::bitcore::{Code, ExplicitCode, Word};
use perfcode::construct::{hamming, mollard, trivial, MollardShape};
use perfcode::dataset::{builtin_code, sts_4918, sym_4918, SUBSYSTEM_4918};
use perfcode::groups::{
    automorphism_group, is_transitive, preserves, rotation_group, rotations_at, sts_automorphisms, symmetry_group, PermGroup,
    Permutation,
};
use perfcode::invariants::explicit_kernel;

fn h7() -> Arc<ExplicitCode> {
    Arc::clone(hamming(3).unwrap().as_explicit().unwrap())
}

#[test]
fn groups_of_code_4918() {
    let c = builtin_code(4918).unwrap();
    let sym = symmetry_group(&c).unwrap();
    let mut expected = sym_4918();
    expected.push(Permutation::identity(15));
    assert_eq!(sym, PermGroup::from_elements(15, expected).unwrap());
    assert_eq!(sts_automorphisms(&sts_4918()).unwrap(), sym);

    let x = Word::from_support(15, &[2, 3, 4]).unwrap();
    let rx = rotations_at(&c, &x).unwrap();
    assert_eq!(rx.len(), 4);
    assert!(rx.iter().all(|p| p.order() > 2 && p.stabilizes(&[2, 3, 4])));

    assert!(is_transitive(&c).unwrap());
    assert_eq!(automorphism_group(&c).unwrap().order(), 8192);
    let r = rotation_group(&c).unwrap();
    assert_eq!(r.order(), 2048 * 4 / 64);
    assert!(r.stabilizes(&SUBSYSTEM_4918));
}

#[test]
fn symmetries_of_4918_fix_its_kernel() {
    let c = builtin_code(4918).unwrap();
    let kernel = explicit_kernel(&c).unwrap();
    for p in symmetry_group(&c).unwrap().elements() {
        assert!(preserves(p, &kernel), "{p}");
    }
}

#[test]
fn automorphism_products_stay_in_the_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for code in [builtin_code(4918).unwrap(), h7()] {
        let aut = automorphism_group(&code).unwrap();
        for _ in 0..10_000 {
            let a = &aut.elements[rng.gen_range(0..aut.order())];
            let b = &aut.elements[rng.gen_range(0..aut.order())];
            assert!(aut.contains(&a.compose(b)));
        }
        assert!(aut.elements.iter().all(|a| aut.contains(&a.inverse())));
    }
}

#[test]
fn factor_symmetries_lift_to_the_enumerable_mollard_code() {
    let c = hamming(3).unwrap();
    let m = mollard(&c, &trivial()).unwrap();
    let m = m.as_explicit().unwrap();
    let shape = MollardShape::new(7, 1);
    for p in symmetry_group(&h7()).unwrap().elements() {
        assert!(preserves(&shape.lift_d1(p).unwrap(), m));
    }
    assert!(preserves(&shape.lift_d2(&Permutation::identity(1)).unwrap(), m));
}

fn sampled_preserves(code: &Code, perm: &Permutation, rng: &mut ChaCha8Rng, samples: usize) -> bool {
    (0..samples).all(|_| code.contains(&perm.apply_word(&code.sample(rng))))
}

#[test]
fn factor_symmetries_lift_to_oracle_mollard_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let c = Code::Explicit(builtin_code(4918).unwrap());
    let m = mollard(&c, &hamming(3).unwrap()).unwrap();
    let shape = MollardShape::new(15, 7);
    let sym_c = symmetry_group(c.as_explicit().unwrap()).unwrap();
    let sym_d = symmetry_group(&h7()).unwrap();
    for p in sym_c.elements() {
        assert!(sampled_preserves(&m, &shape.lift_d1(p).unwrap(), &mut rng, 10_000 / sym_c.order()));
    }
    for p in sym_d.elements().iter().step_by(12) {
        assert!(sampled_preserves(&m, &shape.lift_d2(p).unwrap(), &mut rng, 700));
    }
    // a non-symmetry of C does not lift to a symmetry
    let bad = shape.lift_d1(&Permutation::parse_cycles(15, "(1,5)").unwrap()).unwrap();
    assert!(!sampled_preserves(&m, &bad, &mut rng, 200));
}

/// Rotation at `z` in `M(C, D)` assembled from rotations of the factors at `p1(z)`, `p2(z)`.
fn lifted_rotation(shape: &MollardShape, c: &ExplicitCode, d: &ExplicitCode, z: &Word) -> Permutation {
    let (x, y) = shape.projections(z);
    let pc = rotations_at(c, &x).unwrap().into_iter().next().expect("C is transitive");
    let pd = rotations_at(d, &y).unwrap().into_iter().next().expect("D is transitive");
    shape.lift_d1(&pc).unwrap().compose(&shape.lift_d2(&pd).unwrap())
}

#[test]
fn transitive_factors_give_rotations_of_the_enumerable_mollard_code() {
    let m = mollard(&hamming(3).unwrap(), &trivial()).unwrap();
    let m = m.as_explicit().unwrap();
    let shape = MollardShape::new(7, 1);
    let p1 = Arc::clone(trivial().as_explicit().unwrap());
    for z in m.words().iter().step_by(97) {
        let pi = lifted_rotation(&shape, &h7(), &p1, z);
        assert!(m.words().iter().all(|w| m.contains(&(z + &pi.apply_word(w)))));
    }
}

#[test]
fn transitive_factors_give_rotations_of_oracle_mollard_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = builtin_code(4918).unwrap();
    let m = mollard(&Code::Explicit(Arc::clone(&c)), &trivial()).unwrap();
    let shape = MollardShape::new(15, 1);
    let p1 = Arc::clone(trivial().as_explicit().unwrap());
    for _ in 0..20 {
        let z = m.sample(&mut rng);
        let pi = lifted_rotation(&shape, &c, &p1, &z);
        for _ in 0..500 {
            let w = m.sample(&mut rng);
            assert!(m.contains(&(&z + &pi.apply_word(&w))));
        }
    }
}
