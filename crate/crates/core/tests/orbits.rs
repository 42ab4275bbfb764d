use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sympinv::group::{expected_curve_orbit_dimension, jet_space_dim, orbit_dimension};
use sympinv::{Flavor, Geometry};

/// `h_k`: invariants of pure order `k`.
fn new_invariants(flavor: Flavor, g: Geometry, k: usize, rng: &mut ChaCha8Rng) -> usize {
    let count = |k: usize, rng: &mut ChaCha8Rng| jet_space_dim(g, k) - orbit_dimension(flavor, g, k, rng).unwrap();
    let here = count(k, rng);
    if k == 0 {
        here
    } else {
        here - count(k - 1, rng)
    }
}

#[test]
fn curve_table_general_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=3 {
        for k in 0..=2 * n {
            let got = orbit_dimension(Flavor::Sp, Geometry::Curve { n }, k, &mut rng).unwrap();
            assert_eq!(got, expected_curve_orbit_dimension(n, k), "n={n} k={k}");
        }
    }
}

#[test]
fn hypersurface_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let g = Geometry::Hypersurface { n: 2 };
    assert_eq!(orbit_dimension(Flavor::Sp, g, 1, &mut rng).unwrap(), jet_space_dim(g, 1));
    assert_eq!(new_invariants(Flavor::Sp, g, 2, &mut rng), 3);
    assert_eq!(new_invariants(Flavor::Sp, g, 3, &mut rng), 10);
}

#[test]
fn surface_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    assert_eq!(new_invariants(Flavor::Sp, Geometry::Surface, 2, &mut rng), 4);
    assert_eq!(new_invariants(Flavor::Sp, Geometry::Surface, 3, &mut rng), 8);
}

#[test]
fn contact_function_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let g = Geometry::ContactFunction;
    assert_eq!(new_invariants(Flavor::ContactCSp, g, 0, &mut rng), 1);
    assert_eq!(new_invariants(Flavor::ContactCSp, g, 1, &mut rng), 2);
}
