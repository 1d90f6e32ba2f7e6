//! End-to-end runs through frames, W-algebras, reduction mod p and the
//! superalgebra calculus.

use num_bigint::BigInt;
use wsuper_core::algebra_data::{build_d21a, build_gl, build_osp12n, element, osp12_regular_nilpotent};
use wsuper_core::modular::{
    admissibility, build_baby_verma, p_center_element, reduce_frame, reduce_mod_p, reduced_env_dim, whittaker_vectors,
};
use wsuper_core::nilpotent_frame::{FrameOptions, NilpotentFrame};
use wsuper_core::pbw_engine::InducedModel;
use wsuper_core::scalar::{rat, Scalar};
use wsuper_core::superstructure::{classify_simple, graded_tensor, m_algebra, q_algebra, SimpleType};
use wsuper_core::walgebra::WAlgebra;
use wsuper_core::{Error, Exec};

#[test]
fn osp_baby_verma_at_seven() {
    let g = build_osp12n(1).unwrap();
    let e = osp12_regular_nilpotent(&g).unwrap();
    let frame = NilpotentFrame::new(&g, &e, FrameOptions::default()).unwrap();
    let m = reduce_mod_p(&g, 7).unwrap();
    let fp = reduce_frame(&frame, 7).unwrap();
    for lambda in [0, 3] {
        let z = build_baby_verma(&m, &fp, lambda).unwrap();
        assert_eq!(z.dims(), (7, 7));
        assert!(z.respects_brackets(&m.base));
        assert!(z.respects_p_character(&m).unwrap());
        assert_eq!(whittaker_vectors(&z, &fp).len(), 2);
    }
}

#[test]
fn irreducibility_search_is_bounded() {
    let g = build_osp12n(1).unwrap();
    let e = osp12_regular_nilpotent(&g).unwrap();
    let frame = NilpotentFrame::new(&g, &e, FrameOptions::default()).unwrap();
    let m = reduce_mod_p(&g, 7).unwrap();
    let z = build_baby_verma(&m, &reduce_frame(&frame, 7).unwrap(), 1).unwrap();
    assert!(matches!(z.is_irreducible(1000), Err(Error::SearchTooLarge(_))));
}

#[test]
fn d21a_reduction_uses_the_adjoint_p_map() {
    let g = build_d21a(&rat(2, 1)).unwrap();
    let m = reduce_mod_p(&g, 5).unwrap();
    assert!(m.restrictedness(&[2]).unwrap().all());
    // 1 + a = 3 is not invertible mod 3.
    assert!(!admissibility(&g, 3, None).ok());
    assert!(matches!(reduce_mod_p(&g, 3), Err(Error::Inadmissible { p: 3, .. })));
}

#[test]
fn gl_p_center_is_central() {
    let g = build_gl(1, 1).unwrap();
    let m = reduce_mod_p(&g, 3).unwrap();
    let env = InducedModel::enveloping(&m.base).unwrap();
    let x = element(&m.base, &[("E11", Scalar::fp(1, 3)), ("E22", Scalar::fp(2, 3))]).unwrap();
    let z = p_center_element(&m, &env, &x).unwrap();
    assert!(z.is_central(&env).unwrap());
    assert_eq!(reduced_env_dim(&g, 3), BigInt::from(9 * 4));
}

#[test]
fn gl21_relations_respect_degree_bounds() {
    let g = build_gl(2, 1).unwrap();
    let e = element(&g, &[("E12", Scalar::one())]).unwrap();
    let frame = NilpotentFrame::new(&g, &e, FrameOptions::default()).unwrap();
    let w = WAlgebra::compute(&frame, 8, Exec::Sequential).unwrap();
    let par = WAlgebra::compute(&frame, 8, Exec::default()).unwrap();
    assert_eq!(w.space.basis, par.space.basis);
    let t = w.commutator_table().unwrap();
    assert!(t.check().all());
}

#[test]
fn tensor_powers_of_q1_alternate() {
    let q = q_algebra(1).unwrap();
    let mut t = q.clone();
    let mut expected = SimpleType::Q { n: 1 };
    for _ in 0..3 {
        t = graded_tensor(&t, &q);
        expected = expected.tensor(&SimpleType::Q { n: 1 });
        assert_eq!(classify_simple(&t).unwrap(), expected);
    }
    assert_eq!(expected, SimpleType::m(2, 2));
    let mixed = graded_tensor(&m_algebra(2, 1).unwrap(), &q);
    assert_eq!(classify_simple(&mixed).unwrap(), SimpleType::Q { n: 3 });
}
