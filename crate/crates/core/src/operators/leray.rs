use alloc::vec::Vec;

use crate::{Complex64, Field, VectorField};

/// Leray projector `P = Id + ∇(-Δ)^{-1} div`, symbol `δ_{il} - k̃_i k̃_l / |k̃|²`.
///
/// Uses the resolved wavevector `k̃` (Nyquist components zeroed), the same one
/// the derivatives use, so `div P f = 0` holds exactly on the lattice. The
/// mean mode and pure-Nyquist modes pass through unchanged.
pub fn leray_project(f: &VectorField) -> VectorField {
    let grid = f.grid();
    let d = f.dim();
    let mut out: Vec<Vec<Complex64>> = f.components().iter().map(|c| c.spectral().to_vec()).collect();
    for s in 0..grid.len() {
        let k2 = grid.resolved_sq(s);
        if k2 == 0.0 {
            continue;
        }
        let k = grid.resolved_wavevector(s);
        let mut dot = Complex64::new(0.0, 0.0);
        for (a, c) in f.components().iter().enumerate() {
            dot += k[a] * c.spectral()[s];
        }
        let dot = dot / k2;
        for (a, comp) in out.iter_mut().enumerate().take(d) {
            comp[s] -= k[a] * dot;
        }
    }
    VectorField::new(out.into_iter().map(|c| Field::from_symmetric(grid, c)).collect()).expect("shared grid")
}
