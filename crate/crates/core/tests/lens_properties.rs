use fisheye::lens::{allowed_m, mode_function, order_parameter, orthonormality_check, DiskPoint, LensConfig, ModeIndex};
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn modes_vanish_on_mirror() {
    let cfg = LensConfig::with_radius(3.34, 0.1).unwrap();
    for l in 0..=40usize {
        for m in allowed_m(l) {
            for phi in [0.0, 1.3, 4.4] {
                let f = mode_function(&cfg, ModeIndex::new(l, m).unwrap(), DiskPoint::new(1.0, phi).unwrap());
                assert!(f.norm() < 1e-12, "l {l} m {m}: {f}");
            }
        }
    }
}

#[test]
fn degeneracy_equals_degree() {
    for l in 0..=1000usize {
        let ms = allowed_m(l);
        assert_eq!(ms.len(), l);
        assert!(ms.iter().all(|m| (l as i64 - m).rem_euclid(2) == 1 && m.unsigned_abs() as usize <= l));
    }
}

#[test]
fn orthonormal_up_to_degree_eight() {
    let cfg = LensConfig::with_radius(3.34, 0.1).unwrap();
    let modes: Vec<ModeIndex> = (0..=8usize)
        .flat_map(|l| allowed_m(l).into_iter().map(move |m| ModeIndex::new(l, m).unwrap()))
        .collect();
    assert_eq!(modes.len(), 36);
    for a in &modes {
        for b in &modes {
            let v = orthonormality_check(&cfg, *a, *b, 128).unwrap();
            let target = if a == b { 1.0 } else { 0.0 };
            assert!((v - target).norm() < 1e-6, "{a:?} {b:?}: {v}");
        }
    }
}

proptest! {
    #[test]
    fn degree_grows_with_radius(r in 0.2f64..30.0, dr in 1e-3f64..5.0) {
        let w = Complex64::new(fisheye::lens::OMEGA0, 0.0);
        let a = order_parameter(&LensConfig::with_radius(r, 0.1).unwrap(), w).value().re;
        let b = order_parameter(&LensConfig::with_radius(r + dr, 0.1).unwrap(), w).value().re;
        prop_assert!(b > a);
    }
}
