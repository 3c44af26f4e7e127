//! Scalar and vector fields on a [`Grid`].
//!
//! A [`Field`] holds its real-space samples and its Fourier coefficients side
//! by side; every constructor fills both, so the pair is always consistent and
//! a `Field` is an immutable, `Send + Sync` value. Linear combinations act on
//! both representations directly and need no transform.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::fft::{self, Direction};
use crate::{norms, Error, Grid, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A real scalar function on the torus.
#[derive(Clone, Debug)]
pub struct Field {
    grid: Grid,
    real: Vec<f64>,
    spectral: Vec<Complex64>,
}

impl Field {
    /// Wrap real-space samples (row-major, axis 0 slowest).
    pub fn from_real(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        let spectral = fft::forward_real(grid, &values)?;
        Ok(Self {
            grid: grid.clone(),
            real: values,
            spectral,
        })
    }

    /// Build from Fourier coefficients. The coefficients are projected onto
    /// the conjugate-symmetric subspace first, which is the same as keeping
    /// the real part of the inverse transform.
    pub fn from_spectral(grid: &Grid, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                found: coefficients.len(),
            });
        }
        let symmetric = (0..grid.len())
            .map(|s| 0.5 * (coefficients[s] + coefficients[grid.mirror(s)].conj()))
            .collect();
        Ok(Self::from_symmetric(grid, symmetric))
    }

    /// Coefficients already conjugate-symmetric, length already checked.
    pub(crate) fn from_symmetric(grid: &Grid, spectral: Vec<Complex64>) -> Self {
        let mut data = spectral.clone();
        fft::transform(grid, &mut data, Direction::Inverse).expect("length checked by caller");
        Self {
            grid: grid.clone(),
            real: data.into_iter().map(|c| c.re).collect(),
            spectral,
        }
    }

    /// Sample `f(x)` at every site; `x` has `grid.dim()` coordinates.
    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        let d = grid.dim();
        let values = (0..grid.len()).map(|s| f(&grid.point(s)[..d])).collect();
        Self::from_real(grid, values).expect("one value per site")
    }

    /// The zero field.
    pub fn zeros(grid: &Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    /// A constant field.
    pub fn constant(grid: &Grid, c: f64) -> Self {
        let mut spectral = alloc::vec![Complex64::new(0.0, 0.0); grid.len()];
        spectral[0] = Complex64::new(c, 0.0);
        Self {
            grid: grid.clone(),
            real: alloc::vec![c; grid.len()],
            spectral,
        }
    }

    /// The grid the field lives on.
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Real-space samples.
    pub fn real(&self) -> &[f64] {
        &self.real
    }

    /// Fourier coefficients, forward-normalized by `N^d`.
    pub fn spectral(&self) -> &[Complex64] {
        &self.spectral
    }

    /// Spatial mean, i.e. the `k = 0` coefficient.
    pub fn mean(&self) -> f64 {
        self.spectral[0].re
    }

    /// `∫ f` over the torus.
    pub fn integral(&self) -> f64 {
        self.mean() * self.grid.volume()
    }

    /// Smallest sample.
    pub fn min(&self) -> f64 {
        self.real.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Largest sample.
    pub fn max(&self) -> f64 {
        self.real.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// True when every sample is finite.
    pub fn is_finite(&self) -> bool {
        self.real.iter().all(|v| v.is_finite())
    }

    /// Riemann-sum `L^p` norm; the grid maximum for `p = ∞`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        norms::lp_norm(self.real.iter().copied(), self.grid.cell_volume(), p)
    }

    /// `L^2` norm via Parseval: `(L^d Σ_k |ĉ_k|²)^{1/2}`.
    pub fn spectral_l2(&self) -> f64 {
        libm::sqrt(self.grid.volume() * self.spectral.iter().map(|c| c.norm_sqr()).sum::<f64>())
    }

    /// `∫ f g` by the Riemann sum.
    pub fn inner(&self, other: &Field) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        Ok(self.real.iter().zip(&other.real).map(|(a, b)| a * b).sum::<f64>() * self.grid.cell_volume())
    }

    /// Apply a Fourier multiplier given per site. The multiplier must map
    /// conjugate-symmetric spectra to conjugate-symmetric spectra (real even
    /// symbols, or `i` times real odd symbols).
    pub fn apply_multiplier(&self, symbol: impl Fn(usize) -> Complex64) -> Field {
        let spectral = self
            .spectral
            .iter()
            .enumerate()
            .map(|(s, c)| symbol(s) * c)
            .collect();
        Self::from_symmetric(&self.grid, spectral)
    }

    /// Apply a real, even Fourier multiplier.
    pub fn apply_real_multiplier(&self, symbol: impl Fn(usize) -> f64) -> Field {
        self.apply_multiplier(|s| Complex64::new(symbol(s), 0.0))
    }

    /// `∂_axis f`. Nyquist modes have zero derivative.
    pub fn derivative(&self, axis: usize) -> Field {
        assert!(axis < self.grid.dim(), "axis {axis} out of range");
        let grid = self.grid.clone();
        self.apply_multiplier(move |s| I * grid.resolved_wavevector(s)[axis])
    }

    /// `∇f`.
    pub fn gradient(&self) -> VectorField {
        VectorField {
            components: (0..self.grid.dim()).map(|a| self.derivative(a)).collect(),
        }
    }

    /// `Δf` with symbol `-|k̃|²`, so that `Δ = div ∇` holds exactly.
    pub fn laplacian(&self) -> Field {
        let grid = self.grid.clone();
        self.apply_real_multiplier(move |s| -grid.resolved_sq(s))
    }

    /// Zero every mode with some `|k_i| > N/3` (the 2/3 rule).
    pub fn dealias(&self) -> Field {
        let grid = self.grid.clone();
        self.apply_real_multiplier(move |s| if grid.retains(s) { 1.0 } else { 0.0 })
    }

    /// Whether the field already lies in the dealiased subspace.
    pub fn is_dealiased(&self) -> bool {
        self.spectral
            .iter()
            .enumerate()
            .all(|(s, c)| self.grid.retains(s) || *c == Complex64::new(0.0, 0.0))
    }

    /// Raw pointwise product, aliasing included.
    pub fn pointwise(&self, other: &Field) -> Result<Field> {
        self.grid.check_same(&other.grid)?;
        let values = self.real.iter().zip(&other.real).map(|(a, b)| a * b).collect();
        Field::from_real(&self.grid, values)
    }

    /// Dealiased product `dealias(f g)`.
    pub fn product(&self, other: &Field) -> Result<Field> {
        Ok(self.pointwise(other)?.dealias())
    }

    /// `Σ c_i f_i` over fields sharing this field's grid.
    pub fn linear_combination(grid: &Grid, terms: &[(f64, &Field)]) -> Result<Field> {
        let mut real = alloc::vec![0.0; grid.len()];
        let mut spectral = alloc::vec![Complex64::new(0.0, 0.0); grid.len()];
        for (c, f) in terms {
            grid.check_same(&f.grid)?;
            for (r, v) in real.iter_mut().zip(&f.real) {
                *r += c * v;
            }
            for (r, v) in spectral.iter_mut().zip(&f.spectral) {
                *r += *c * v;
            }
        }
        Ok(Field {
            grid: grid.clone(),
            real,
            spectral,
        })
    }

    /// `c f`.
    pub fn scaled(&self, c: f64) -> Field {
        Field {
            grid: self.grid.clone(),
            real: self.real.iter().map(|v| c * v).collect(),
            spectral: self.spectral.iter().map(|v| c * v).collect(),
        }
    }

    /// `f + c`.
    pub fn shifted(&self, c: f64) -> Field {
        let mut out = self.clone();
        out.real.iter_mut().for_each(|v| *v += c);
        out.spectral[0] += c;
        out
    }
}

fn combine(a: &Field, b: &Field, sign: f64) -> Field {
    assert!(a.grid.same_as(&b.grid), "field arithmetic across different grids");
    Field {
        grid: a.grid.clone(),
        real: a.real.iter().zip(&b.real).map(|(x, y)| x + sign * y).collect(),
        spectral: a.spectral.iter().zip(&b.spectral).map(|(x, y)| x + sign * y).collect(),
    }
}

/// Panics if the grids differ.
impl Add for &Field {
    type Output = Field;
    fn add(self, rhs: &Field) -> Field {
        combine(self, rhs, 1.0)
    }
}

/// Panics if the grids differ.
impl Sub for &Field {
    type Output = Field;
    fn sub(self, rhs: &Field) -> Field {
        combine(self, rhs, -1.0)
    }
}

impl Mul<&Field> for f64 {
    type Output = Field;
    fn mul(self, rhs: &Field) -> Field {
        rhs.scaled(self)
    }
}

impl Neg for &Field {
    type Output = Field;
    fn neg(self) -> Field {
        self.scaled(-1.0)
    }
}

/// A vector field with `d` components on a shared grid.
#[derive(Clone, Debug)]
pub struct VectorField {
    components: Vec<Field>,
}

impl VectorField {
    /// Components must number `grid.dim()` and share one grid.
    pub fn new(components: Vec<Field>) -> Result<Self> {
        let first = components.first().ok_or(Error::ComponentMismatch {
            expected: 2,
            found: 0,
        })?;
        let grid = first.grid().clone();
        if components.len() != grid.dim() {
            return Err(Error::ComponentMismatch {
                expected: grid.dim(),
                found: components.len(),
            });
        }
        for c in &components {
            grid.check_same(c.grid())?;
        }
        Ok(Self { components })
    }

    /// The zero vector field.
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            components: (0..grid.dim()).map(|_| Field::zeros(grid)).collect(),
        }
    }

    /// Sample `f(x)` componentwise; `f` writes `grid.dim()` values into `out`.
    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64], &mut [f64])) -> Self {
        let d = grid.dim();
        let mut values: Vec<Vec<f64>> = (0..d).map(|_| Vec::with_capacity(grid.len())).collect();
        let mut out = [0.0; 3];
        for s in 0..grid.len() {
            f(&grid.point(s)[..d], &mut out[..d]);
            for a in 0..d {
                values[a].push(out[a]);
            }
        }
        Self {
            components: values
                .into_iter()
                .map(|v| Field::from_real(grid, v).expect("one value per site"))
                .collect(),
        }
    }

    /// Shared grid.
    pub fn grid(&self) -> &Grid {
        self.components[0].grid()
    }

    /// Number of components.
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Component `i`.
    pub fn component(&self, i: usize) -> &Field {
        &self.components[i]
    }

    /// All components.
    pub fn components(&self) -> &[Field] {
        &self.components
    }

    /// Consume into components.
    pub fn into_components(self) -> Vec<Field> {
        self.components
    }

    /// Apply `f` to each component.
    pub fn map(&self, f: impl Fn(&Field) -> Field) -> VectorField {
        VectorField {
            components: self.components.iter().map(f).collect(),
        }
    }

    /// `div v`.
    pub fn divergence(&self) -> Field {
        let grid = self.grid();
        let parts: Vec<Field> = self
            .components
            .iter()
            .enumerate()
            .map(|(a, c)| c.derivative(a))
            .collect();
        let terms: Vec<(f64, &Field)> = parts.iter().map(|p| (1.0, p)).collect();
        Field::linear_combination(grid, &terms).expect("shared grid")
    }

    /// Componentwise dealiasing.
    pub fn dealias(&self) -> VectorField {
        self.map(Field::dealias)
    }

    /// `L^p` norm of the pointwise Euclidean magnitude `|v(x)|`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        let grid = self.grid();
        let mags = (0..grid.len()).map(|s| {
            libm::sqrt(self.components.iter().map(|c| c.real()[s] * c.real()[s]).sum::<f64>())
        });
        norms::lp_norm(mags, grid.cell_volume(), p)
    }

    /// `Σ_i ∫ v^i w^i`.
    pub fn inner(&self, other: &VectorField) -> Result<f64> {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.inner(b))
            .sum()
    }

    /// `½ ∫ |v|²`.
    pub fn kinetic_energy(&self) -> f64 {
        0.5 * self.inner(self).expect("same grid")
    }

    /// `max_x |∇v(x)|` with the Frobenius norm of the Jacobian.
    pub fn gradient_sup(&self) -> f64 {
        let grid = self.grid();
        let d = self.dim();
        let derivs: Vec<Field> = self
            .components
            .iter()
            .flat_map(|c| (0..d).map(move |a| c.derivative(a)))
            .collect();
        (0..grid.len())
            .map(|s| libm::sqrt(derivs.iter().map(|f| f.real()[s] * f.real()[s]).sum::<f64>()))
            .fold(0.0, f64::max)
    }

    /// `v · ∇f`, dealiased.
    pub fn dot_grad(&self, f: &Field) -> Result<Field> {
        let grid = self.grid();
        grid.check_same(f.grid())?;
        let mut acc = alloc::vec![0.0; grid.len()];
        for (a, c) in self.components.iter().enumerate() {
            let df = f.derivative(a);
            for ((o, x), y) in acc.iter_mut().zip(c.real()).zip(df.real()) {
                *o += x * y;
            }
        }
        Ok(Field::from_real(grid, acc)?.dealias())
    }

    /// `v · ∇w` componentwise, dealiased.
    pub fn advect(&self, w: &VectorField) -> Result<VectorField> {
        Ok(VectorField {
            components: w
                .components
                .iter()
                .map(|c| self.dot_grad(c))
                .collect::<Result<_>>()?,
        })
    }

    /// `f v`, dealiased.
    pub fn times_scalar(&self, f: &Field) -> Result<VectorField> {
        Ok(VectorField {
            components: self
                .components
                .iter()
                .map(|c| c.product(f))
                .collect::<Result<_>>()?,
        })
    }

    /// `c v`.
    pub fn scaled(&self, c: f64) -> VectorField {
        self.map(|f| f.scaled(c))
    }

    /// True when every component is finite.
    pub fn is_finite(&self) -> bool {
        self.components.iter().all(Field::is_finite)
    }
}

/// Panics if the grids differ.
impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        VectorField {
            components: self.components.iter().zip(&rhs.components).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Panics if the grids differ.
impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        VectorField {
            components: self.components.iter().zip(&rhs.components).map(|(a, b)| a - b).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{random_band_limited, random_field, rng};
    use core::f64::consts::{PI, TAU};

    fn grid2(n: usize) -> Grid {
        Grid::new(2, n, TAU).unwrap()
    }

    #[test]
    fn constant_has_only_mean_mode() {
        let g = grid2(8);
        let f = Field::from_fn(&g, |_| 3.5);
        assert!((f.spectral()[0].re - 3.5).abs() < 1e-15);
        for c in &f.spectral()[1..] {
            assert!(c.norm() < 1e-15);
        }
    }

    #[test]
    fn sine_occupies_two_modes() {
        let g = grid2(16);
        let f = Field::from_fn(&g, |x| libm::sin(x[0]));
        for (s, c) in f.spectral().iter().enumerate() {
            let k = g.integer_frequency(s);
            if k[0].abs() == 1 && k[1] == 0 {
                assert!((c.norm() - 0.5).abs() < 1e-14);
            } else {
                assert!(c.norm() < 1e-14, "mode {k:?} = {c}");
            }
        }
    }

    #[test]
    fn round_trip_random() {
        let g = grid2(32);
        let mut r = rng(1);
        let f = random_field(&g, &mut r);
        let back = Field::from_spectral(&g, f.spectral().to_vec()).unwrap();
        let scale = f.lp_norm(f64::INFINITY).unwrap();
        for (a, b) in f.real().iter().zip(back.real()) {
            assert!((a - b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let g = Grid::new(3, 8, TAU).unwrap();
        let f = random_field(&g, &mut rng(2));
        for s in 0..g.len() {
            let a = f.spectral()[s];
            let b = f.spectral()[g.mirror(s)].conj();
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn from_spectral_rejects_wrong_length() {
        let g = grid2(8);
        assert!(matches!(
            Field::from_spectral(&g, alloc::vec![Complex64::new(0.0, 0.0); 10]),
            Err(Error::SizeMismatch { expected: 64, found: 10 })
        ));
        assert!(Field::from_real(&g, alloc::vec![0.0; 65]).is_err());
    }

    #[test]
    fn lp_norm_examples() {
        let g = grid2(16);
        let one = Field::constant(&g, 1.0);
        assert!((one.lp_norm(2.0).unwrap() - TAU).abs() < 1e-13);
        let s = Field::from_fn(&g, |x| libm::sin(x[0]));
        assert!((s.lp_norm(2.0).unwrap() - libm::sqrt(2.0) * PI).abs() < 1e-13);
        assert!((s.lp_norm(f64::INFINITY).unwrap() - 1.0).abs() < 1e-15);
        assert!(s.lp_norm(0.0).is_err());
    }

    // Riemann sums are exact for trigonometric polynomials of degree < N, so
    // f^4 with f band-limited below N/4 is integrated exactly; the oracle is
    // the same integral on a grid refined by zero-padding.
    #[test]
    fn lp4_matches_refined_quadrature() {
        let g = grid2(16);
        let fine = grid2(64);
        let f = random_band_limited(&g, 3, &mut rng(3));
        let mut padded = alloc::vec![Complex64::new(0.0, 0.0); fine.len()];
        for (s, c) in f.spectral().iter().enumerate() {
            let k = g.integer_frequency(s);
            if c.norm() == 0.0 {
                continue;
            }
            let i0 = k[0].rem_euclid(64) as usize;
            let i1 = k[1].rem_euclid(64) as usize;
            padded[i0 * 64 + i1] = *c;
        }
        let ff = Field::from_spectral(&fine, padded).unwrap();
        let oracle = libm::pow(
            ff.real().iter().map(|v| libm::pow(*v, 4.0)).sum::<f64>() * fine.cell_volume(),
            0.25,
        );
        let got = f.lp_norm(4.0).unwrap();
        assert!((got - oracle).abs() <= 1e-10 * oracle, "{got} vs {oracle}");
    }

    #[test]
    fn parseval() {
        let g = grid2(32);
        for seed in 0..5 {
            let f = random_field(&g, &mut rng(seed));
            let a = f.lp_norm(2.0).unwrap();
            assert!((a - f.spectral_l2()).abs() <= 1e-10 * a);
        }
    }

    #[test]
    fn homogeneity() {
        let g = grid2(16);
        let f = random_field(&g, &mut rng(9));
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            let a = f.lp_norm(p).unwrap();
            let b = f.scaled(-2.5).lp_norm(p).unwrap();
            assert!((b - 2.5 * a).abs() <= 1e-12 * b);
        }
    }

    #[test]
    fn dealias_keeps_band_limited_and_kills_high_modes() {
        let g = grid2(32);
        let f = random_band_limited(&g, 10, &mut rng(4));
        let d = f.dealias();
        for (a, b) in f.real().iter().zip(d.real()) {
            assert!((a - b).abs() < 1e-14);
        }
        let high = Field::from_fn(&g, |x| libm::cos(15.0 * x[0]));
        assert!(high.dealias().lp_norm(f64::INFINITY).unwrap() < 1e-13);
    }

    #[test]
    fn dealiased_product_matches_fine_grid() {
        let g = grid2(32);
        let fine = grid2(64);
        let mut r = rng(5);
        let f = random_band_limited(&g, 10, &mut r);
        let h = random_band_limited(&g, 10, &mut r);
        let lift = |x: &Field| {
            let mut padded = alloc::vec![Complex64::new(0.0, 0.0); fine.len()];
            for (s, c) in x.spectral().iter().enumerate() {
                let k = g.integer_frequency(s);
                padded[k[0].rem_euclid(64) as usize * 64 + k[1].rem_euclid(64) as usize] = *c;
            }
            Field::from_spectral(&fine, padded).unwrap()
        };
        let exact = lift(&f).pointwise(&lift(&h)).unwrap();
        let got = f.product(&h).unwrap();
        let scale = exact.lp_norm(f64::INFINITY).unwrap();
        for (s, c) in got.spectral().iter().enumerate() {
            let k = g.integer_frequency(s);
            let fs = k[0].rem_euclid(64) as usize * 64 + k[1].rem_euclid(64) as usize;
            let expected = if g.retains(s) { exact.spectral()[fs] } else { Complex64::new(0.0, 0.0) };
            assert!((c - expected).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn laplacian_is_divergence_of_gradient() {
        let g = grid2(16);
        let f = random_field(&g, &mut rng(6));
        let a = f.laplacian();
        let b = f.gradient().divergence();
        for (x, y) in a.real().iter().zip(b.real()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn vector_field_requires_matching_components() {
        let g = grid2(8);
        let other = Grid::new(2, 16, TAU).unwrap();
        assert!(VectorField::new(alloc::vec![Field::zeros(&g)]).is_err());
        assert_eq!(
            VectorField::new(alloc::vec![Field::zeros(&g), Field::zeros(&other)]).unwrap_err(),
            Error::GridMismatch
        );
    }
}
