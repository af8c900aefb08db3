use xxring::analytic::{self, critical_points};
use xxring::oracle::{self, build_spin_hamiltonian, ground_eigenpair};
use xxring::statevector;

/// Field grid over [-1.5, 1.5] with points within `radius` of a crossing
/// dropped.
fn grid_away_from_crossings(sites: usize, points: usize, radius: f64) -> Vec<f64> {
    let crossings: Vec<f64> = critical_points(sites).iter().map(|c| c.g_c).collect();
    (0..points)
        .map(|i| -1.5 + 3.0 * i as f64 / (points - 1) as f64)
        .filter(|g| crossings.iter().all(|c| (g - c).abs() > radius))
        .collect()
}

#[test]
fn energies_match_dense_diagonalization() {
    for n in 3..=10 {
        for g in grid_away_from_crossings(n, 41, 1e-3) {
            let h = build_spin_hamiltonian(n, g).unwrap();
            let gp = ground_eigenpair(&h).unwrap();
            let analytic = n as f64 * analytic::ground_energy_density(n, g);
            assert!(
                (analytic - gp.energy).abs() < 1e-8,
                "N={n} g={g}: {analytic} vs {}",
                gp.energy
            );
        }
    }
}

#[test]
fn slater_states_match_oracle_vectors() {
    for n in 3..=10 {
        for g in grid_away_from_crossings(n, 41, 1e-3) {
            let h = build_spin_hamiltonian(n, g).unwrap();
            let gp = ground_eigenpair(&h).unwrap();
            assert!(!gp.degenerate, "N={n} g={g} gap={}", gp.gap);
            let psi = statevector::ground_state(n, g).unwrap();
            let overlap = psi.inner(&gp.vector).unwrap().norm();
            assert!(
                (overlap - 1.0).abs() < 1e-8,
                "N={n} g={g}: |<a|o>| = {overlap}"
            );
            let e = h.expectation(&psi).unwrap() / n as f64;
            assert!((e - analytic::ground_energy_density(n, g)).abs() < 1e-9);
        }
    }
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn spin_flip_maps_field_to_minus_field() {
    for n in 3..=8 {
        for &g in &[0.37, 1.2] {
            let plus = oracle::eigenvalues(&build_spin_hamiltonian(n, g).unwrap()).unwrap();
            let minus = oracle::eigenvalues(&build_spin_hamiltonian(n, -g).unwrap()).unwrap();
            assert!(max_gap(&plus, &minus) < 1e-10, "N={n} g={g}");
        }
    }
}

#[test]
fn spectrum_negates_under_field_reversal_on_even_rings() {
    for n in [4, 6, 8] {
        for &g in &[0.37, 1.2] {
            let plus = oracle::eigenvalues(&build_spin_hamiltonian(n, g).unwrap()).unwrap();
            let mut negated: Vec<f64> =
                oracle::eigenvalues(&build_spin_hamiltonian(n, -g).unwrap())
                    .unwrap()
                    .into_iter()
                    .map(|e| -e)
                    .collect();
            negated.sort_by(f64::total_cmp);
            assert!(max_gap(&plus, &negated) < 1e-10, "N={n} g={g}");
        }
    }
    // a triangle is frustrated: the hopping sign cannot be gauged away
    let plus = oracle::eigenvalues(&build_spin_hamiltonian(3, 0.37).unwrap()).unwrap();
    let mut negated: Vec<f64> = oracle::eigenvalues(&build_spin_hamiltonian(3, -0.37).unwrap())
        .unwrap()
        .into_iter()
        .map(|e| -e)
        .collect();
    negated.sort_by(f64::total_cmp);
    assert!(max_gap(&plus, &negated) > 0.1);
}

#[test]
fn crossings_are_degenerate_in_the_oracle() {
    for n in [4, 5, 8] {
        for c in &critical_points(n)[..n] {
            let gp = ground_eigenpair(&build_spin_hamiltonian(n, c.g_c).unwrap()).unwrap();
            assert!(gp.degenerate, "N={n} g_c({})={}", c.n, c.g_c);
        }
    }
}
