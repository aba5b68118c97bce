use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::design::substream;
use crate::error::{Error, Result};
use crate::population::{summarize, FinitePopulation, PopulationSummary, Unit};

/// Targets for a synthetic `(y, x, z)` population. Arrays are in `y, x, z`
/// order; `target_rhos` is `(ρ_xy, ρ_xz, ρ_yz)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n_population: usize,
    pub target_means: [f64; 3],
    pub target_cvs: [f64; 3],
    pub target_rhos: [f64; 3],
    pub seed: u64,
    /// Round generated values to integers.
    #[serde(default)]
    pub round_to_integers: bool,
}

impl GenSpec {
    /// Targets equal to the bundled head-measurement parameters.
    pub fn anderson_like(n_population: usize, seed: u64) -> Self {
        Self {
            n_population,
            target_means: [183.84, 185.72, 151.12],
            target_cvs: [0.0546, 0.0526, 0.0488],
            target_rhos: [0.7108, 0.7346, 0.6932],
            seed,
            round_to_integers: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedPopulation {
    pub population: FinitePopulation,
    /// Parameters of the generated units; downstream analysis uses these,
    /// not the targets.
    pub realized: PopulationSummary,
}

/// Lower Cholesky factor of the `(y, x, z)` correlation matrix built from
/// `(ρ_xy, ρ_xz, ρ_yz)`. Semi-definite matrices are accepted (zero pivots
/// give zero columns).
pub fn correlation_cholesky(rhos: [f64; 3]) -> Result<[[f64; 3]; 3]> {
    const TOL: f64 = 1e-12;
    let [rxy, rxz, ryz] = rhos;
    if rhos.iter().any(|r| !r.is_finite() || r.abs() > 1.0) {
        return Err(Error::NotPositiveSemidefinite);
    }
    let m = [[1.0, rxy, ryz], [rxy, 1.0, rxz], [ryz, rxz, 1.0]];
    let mut l = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let pivot = m[i][i] - s;
                if pivot < -TOL {
                    return Err(Error::NotPositiveSemidefinite);
                }
                l[i][i] = pivot.max(0.0).sqrt();
            } else if l[j][j] > TOL {
                l[i][j] = (m[i][j] - s) / l[j][j];
            } else if (m[i][j] - s).abs() > TOL {
                return Err(Error::NotPositiveSemidefinite);
            }
        }
    }
    Ok(l)
}

/// Draws `N` units from a trivariate Gaussian with the target means, CVs
/// and correlations, then freezes them as a finite population.
pub fn generate_population(spec: &GenSpec) -> Result<GeneratedPopulation> {
    if spec.n_population < 2 {
        return Err(Error::TooFewUnits(spec.n_population));
    }
    if spec
        .target_means
        .iter()
        .any(|&m| m == 0.0 || !m.is_finite())
    {
        return Err(Error::InvalidConfig(
            "target means must be finite and non-zero".into(),
        ));
    }
    if spec.target_cvs.iter().any(|&c| c <= 0.0 || !c.is_finite()) {
        return Err(Error::InvalidConfig("target CVs must be positive".into()));
    }
    let l = correlation_cholesky(spec.target_rhos)?;
    let sd: [f64; 3] = std::array::from_fn(|k| spec.target_cvs[k] * spec.target_means[k].abs());

    let mut rng = substream(spec.seed, 0);
    let units = (0..spec.n_population)
        .map(|_| {
            let e: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
            let v: [f64; 3] = std::array::from_fn(|i| {
                let w: f64 = (0..=i).map(|k| l[i][k] * e[k]).sum();
                let v = spec.target_means[i] + sd[i] * w;
                if spec.round_to_integers {
                    v.round()
                } else {
                    v
                }
            });
            Unit {
                y: v[0],
                x: v[1],
                z: v[2],
            }
        })
        .collect();
    let population = FinitePopulation::new(format!("generated-{}", spec.seed), units)?;
    let realized = summarize(&population)?;
    Ok(GeneratedPopulation {
        population,
        realized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Eigenvalues of a symmetric 3×3 matrix (trigonometric closed form).
    fn sym3_eigenvalues(m: [[f64; 3]; 3]) -> [f64; 3] {
        let p1 = m[0][1].powi(2) + m[0][2].powi(2) + m[1][2].powi(2);
        let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
        let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        if p == 0.0 {
            return [q; 3];
        }
        let b: Vec<Vec<f64>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| (m[i][j] - if i == j { q } else { 0.0 }) / p)
                    .collect()
            })
            .collect();
        let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
            - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
            + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
        let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
        let e1 = q + 2.0 * p * phi.cos();
        let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
        [e1, 3.0 * q - e1 - e3, e3]
    }

    fn corr(rxy: f64, rxz: f64, ryz: f64) -> [[f64; 3]; 3] {
        [[1.0, rxy, ryz], [rxy, 1.0, rxz], [ryz, rxz, 1.0]]
    }

    #[test]
    fn psd_check_agrees_with_eigenvalues() {
        let cases = [
            (0.99, 0.99, 0.0),
            (0.7108, 0.7346, 0.6932),
            (0.0, 0.0, 0.0),
            (0.9, -0.9, 0.9),
            (0.5, 0.5, -0.5),
            (1.0, 1.0, 1.0),
        ];
        for (rxy, rxz, ryz) in cases {
            let min_eig = sym3_eigenvalues(corr(rxy, rxz, ryz))
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            let ok = correlation_cholesky([rxy, rxz, ryz]).is_ok();
            assert_eq!(
                ok,
                min_eig > -1e-9,
                "{rxy} {rxz} {ryz}: min eigenvalue {min_eig}"
            );
        }
        assert!(matches!(
            correlation_cholesky([0.99, 0.99, 0.0]),
            Err(Error::NotPositiveSemidefinite)
        ));
    }

    #[test]
    fn factor_reproduces_matrix() {
        let l = correlation_cholesky([0.7108, 0.7346, 0.6932]).unwrap();
        let m = corr(0.7108, 0.7346, 0.6932);
        for i in 0..3 {
            for j in 0..3 {
                let v: f64 = (0..3).map(|k| l[i][k] * l[j][k]).sum();
                assert!((v - m[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn independent_targets() {
        let mut spec = GenSpec::anderson_like(10_000, 11);
        spec.target_rhos = [0.0; 3];
        let g = generate_population(&spec).unwrap();
        for r in [g.realized.rho_xy, g.realized.rho_xz, g.realized.rho_yz] {
            assert!(r.abs() < 0.05, "{r}");
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let spec = GenSpec::anderson_like(50, 5);
        assert_eq!(
            generate_population(&spec).unwrap(),
            generate_population(&spec).unwrap()
        );
        let other = GenSpec::anderson_like(50, 6);
        assert_ne!(
            generate_population(&spec).unwrap().population,
            generate_population(&other).unwrap().population
        );
    }

    #[test]
    fn realized_parameters_near_targets() {
        let spec = GenSpec::anderson_like(2000, 1958);
        let g = generate_population(&spec).unwrap();
        let s = &g.realized;
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        for (got, want) in [
            (s.mean_y, 183.84),
            (s.mean_x, 185.72),
            (s.mean_z, 151.12),
            (s.cv_y, 0.0546),
            (s.cv_x, 0.0526),
            (s.cv_z, 0.0488),
            (s.rho_xy, 0.7108),
            (s.rho_xz, 0.7346),
            (s.rho_yz, 0.6932),
        ] {
            assert!(rel(got, want) < 0.10, "{got} vs {want}");
        }
    }

    #[test]
    fn rounding_mode_yields_integers() {
        let mut spec = GenSpec::anderson_like(100, 3);
        spec.round_to_integers = true;
        let g = generate_population(&spec).unwrap();
        assert!(g
            .population
            .units()
            .iter()
            .all(|u| u.y.fract() == 0.0 && u.z.fract() == 0.0));
        assert_eq!(g.realized, summarize(&g.population).unwrap());
    }
}
