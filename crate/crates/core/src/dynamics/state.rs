use crate::{Error, Field, Grid, Result, VectorField};

/// The triple `(u, n, p)` at time `t` for viscosity `ν`.
#[derive(Debug, Clone)]
pub struct SimState {
    /// Velocity.
    pub u: VectorField,
    /// Negative charge density.
    pub n: Field,
    /// Positive charge density.
    pub p: Field,
    /// Time.
    pub t: f64,
    /// Viscosity, `ν ≥ 0`.
    pub nu: f64,
}

impl SimState {
    /// State at `t = 0`.
    pub fn new(u: VectorField, n: Field, p: Field, nu: f64) -> Result<Self> {
        u.grid().check_same(n.grid())?;
        u.grid().check_same(p.grid())?;
        if !(nu >= 0.0) || !nu.is_finite() {
            return Err(Error::InvalidParameter("viscosity must be finite and nonnegative"));
        }
        Ok(Self { u, n, p, t: 0.0, nu })
    }

    /// Shared grid.
    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    /// True when every field is finite.
    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.n.is_finite() && self.p.is_finite()
    }

    /// Copy with different fields, same `t` and `ν`.
    pub(crate) fn with_fields(&self, u: VectorField, n: Field, p: Field) -> Self {
        Self {
            u,
            n,
            p,
            t: self.t,
            nu: self.nu,
        }
    }
}

/// Time derivatives of `(u, n, p)`.
#[derive(Debug, Clone)]
pub struct Tendencies {
    /// `∂_t u`.
    pub du: VectorField,
    /// `∂_t n`.
    pub dn: Field,
    /// `∂_t p`.
    pub dp: Field,
}

impl Tendencies {
    /// `√(‖du‖² + ‖dn‖² + ‖dp‖²)` in `L²`.
    pub fn l2_norm(&self) -> f64 {
        let u = self.du.lp_norm(2.0).expect("valid exponent");
        let n = self.dn.lp_norm(2.0).expect("valid exponent");
        let p = self.dp.lp_norm(2.0).expect("valid exponent");
        libm::sqrt(u * u + n * n + p * p)
    }

    /// Componentwise `self - other`.
    pub fn difference(&self, other: &Tendencies) -> Tendencies {
        Tendencies {
            du: &self.du - &other.du,
            dn: &self.dn - &other.dn,
            dp: &self.dp - &other.dp,
        }
    }
}
