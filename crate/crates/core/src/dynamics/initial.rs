use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::config::{Generator, InitialData};
use crate::equation::EquationKind;
use crate::error::{config, Result};
use crate::norms::h2_full_norm;
use crate::spectral::{SpectralField, TorusGrid};

/// Euclidean wavenumber radius of the random band generator.
pub const RANDOM_BAND_RADIUS: f64 = 8.0;

pub(crate) fn check_generator(generator: Generator, equation: EquationKind, grid: &TorusGrid) -> Result<()> {
    let ok = match generator {
        Generator::Cmt => equation == EquationKind::Sqg,
        Generator::TaylorGreen3d => equation == EquationKind::Ns && grid.dim() == 3,
        Generator::RandomBand | Generator::Cosine => true,
    };
    if ok {
        Ok(())
    } else {
        Err(config(format!(
            "generator `{}` does not apply to {} on a {}D grid",
            generator.name(),
            equation,
            grid.dim()
        )))
    }
}

/// Seeded, mean-zero, Hermitian field with coefficients on `|k| ≤ 8`
/// (further cut to the 2/3-rule band of the grid). Amplitudes decay like
/// `(1 + |k|²)^{-1}`.
///
/// Modes are drawn in a fixed wavenumber order, so a seed yields the same
/// coefficients on every grid whose band contains the whole ball.
pub fn random_band_field(grid: TorusGrid, components: usize, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = grid.len();
    let n = grid.n() as i64;
    let dim = grid.dim();
    let r = RANDOM_BAND_RADIUS as i64;
    let mut coeffs = vec![Complex64::default(); components * len];
    let third = if dim == 3 { -r..=r } else { 0..=0 };
    for k0 in -r..=r {
        for k1 in -r..=r {
            for k2 in third.clone() {
                let k = [k0, k1, k2];
                // One representative per ± pair: first non-zero entry positive.
                let lead = k.iter().copied().find(|&kj| kj != 0);
                if !matches!(lead, Some(l) if l > 0) {
                    continue;
                }
                let k2sum = (k0 * k0 + k1 * k1 + k2 * k2) as f64;
                if k2sum.sqrt() > RANDOM_BAND_RADIUS {
                    continue;
                }
                let amplitude = 1.0 / (1.0 + k2sum);
                let values: Vec<Complex64> = (0..components)
                    .map(|_| {
                        let re: f64 = StandardNormal.sample(&mut rng);
                        let im: f64 = StandardNormal.sample(&mut rng);
                        Complex64::new(re, im) * amplitude
                    })
                    .collect();
                if k.iter().any(|&kj| 3 * kj.abs() > n) {
                    continue;
                }
                let (Some(flat), Some(neg)) = (
                    grid.flat_index(&k[..dim]),
                    grid.flat_index(&[-k0, -k1, -k2][..dim]),
                ) else {
                    continue;
                };
                for (c, value) in values.into_iter().enumerate() {
                    coeffs[c * len + flat] = value;
                    coeffs[c * len + neg] = value.conj();
                }
            }
        }
    }
    SpectralField::from_coefficients(grid, components, coeffs).expect("sized for the grid")
}

fn cmt(grid: TorusGrid) -> Result<SpectralField> {
    let mut f = SpectralField::zeros(grid, 1);
    f.set_mode(0, &[1, 1], Complex64::new(-0.25, 0.0))?;
    f.set_mode(0, &[1, -1], Complex64::new(0.25, 0.0))?;
    f.set_mode(0, &[0, 1], Complex64::new(0.5, 0.0))?;
    Ok(f)
}

fn taylor_green_3d(grid: TorusGrid) -> Result<SpectralField> {
    let u = grid.sample(|x| x[0].sin() * x[1].cos() * x[2].cos());
    let v = grid.sample(|x| -x[0].cos() * x[1].sin() * x[2].cos());
    let w = vec![0.0; grid.len()];
    let field = SpectralField::forward_transform(grid, 3, &[u, v, w].concat())?;
    // Drop transform round-off so the field is exactly solenoidal.
    field.leray_project()
}

fn cosine(grid: TorusGrid, components: usize) -> Result<SpectralField> {
    let mut f = SpectralField::zeros(grid, components);
    let k = match grid.dim() {
        2 => vec![1, 0],
        _ => vec![1, 0, 0],
    };
    let target = if components == 1 { 0 } else { 1 };
    f.set_mode(target, &k, Complex64::new(0.5, 0.0))?;
    Ok(f)
}

/// Builds initial data and rescales it to the requested `H²` norm.
pub fn make_initial_data(
    data: &InitialData,
    equation: EquationKind,
    grid: TorusGrid,
) -> Result<SpectralField> {
    check_generator(data.generator, equation, &grid)?;
    let components = match equation {
        EquationKind::Sqg => 1,
        EquationKind::Ns => grid.dim(),
    };
    let field = match data.generator {
        Generator::Cmt => cmt(grid)?,
        Generator::RandomBand => {
            let f = random_band_field(grid, components, data.seed);
            if equation == EquationKind::Ns {
                f.leray_project()?
            } else {
                f
            }
        }
        Generator::TaylorGreen3d => taylor_green_3d(grid)?,
        Generator::Cosine => cosine(grid, components)?,
    };
    match data.target_h2 {
        None => Ok(field),
        Some(target) => {
            if !(target > 0.0) {
                return Err(config(format!("target_h2 must be positive, got {target}")));
            }
            let current = h2_full_norm(&field);
            if current == 0.0 {
                return Err(config("generator produced a zero field; cannot rescale"));
            }
            Ok(field.scale(target / current))
        }
    }
}
