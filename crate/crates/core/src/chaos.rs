//! Lorenz and Chen flows integrated with a fixed-step classical RK4 scheme.
//!
//! The two systems are independent: each owns a [`SystemState`] and a
//! parameter set, and is stepped with the same step size. Everything here is
//! a pure function of its inputs.

use std::fmt;

use crate::error::{Error, Result};

/// Step size used by the generator unless a key file overrides it.
pub const DEFAULT_STEP: f64 = 0.001;

/// Lorenz chaos requires `r` above this value (with sigma = 10, rho = 8/3).
pub const LORENZ_CHAOS_R_THRESHOLD: f64 = 24.74;

/// A point in a three-dimensional phase space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemState {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

impl SystemState {
    pub const ORIGIN: SystemState = SystemState::new(0.0, 0.0, 0.0);

    pub const fn new(v1: f64, v2: f64, v3: f64) -> Self {
        SystemState { v1, v2, v3 }
    }

    pub fn is_finite(&self) -> bool {
        self.v1.is_finite() && self.v2.is_finite() && self.v3.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.v1, self.v2, self.v3]
    }

    fn axpy(self, scale: f64, other: SystemState) -> SystemState {
        SystemState::new(
            self.v1 + scale * other.v1,
            self.v2 + scale * other.v2,
            self.v3 + scale * other.v3,
        )
    }

    fn require_finite(&self, what: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain(format!("{what} is not finite: {self}")))
        }
    }
}

impl From<[f64; 3]> for SystemState {
    fn from(v: [f64; 3]) -> Self {
        SystemState::new(v[0], v[1], v[2])
    }
}

impl fmt::Display for SystemState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.v1, self.v2, self.v3)
    }
}

fn require_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "parameter {name} must be finite and strictly positive, got {value}"
        )))
    }
}

/// A parameter set that lies outside the regime in which the system is
/// known to be chaotic. The pipeline still runs; callers decide whether to
/// surface it.
#[derive(Clone, Debug, PartialEq)]
pub struct RegimeWarning {
    pub system: &'static str,
    pub message: String,
}

impl fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} system: {}", self.system, self.message)
    }
}

/// Parameters of the Lorenz flow
/// `(sigma (v2 - v1), r v1 - v1 v3 - v2, v1 v2 - rho v3)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorenzParams {
    pub sigma: f64,
    pub r: f64,
    pub rho: f64,
}

impl LorenzParams {
    pub fn new(sigma: f64, r: f64, rho: f64) -> Result<Self> {
        require_positive("sigma", sigma)?;
        require_positive("r", r)?;
        require_positive("rho", rho)?;
        Ok(LorenzParams { sigma, r, rho })
    }

    pub fn regime_warning(&self) -> Option<RegimeWarning> {
        (self.r <= LORENZ_CHAOS_R_THRESHOLD).then(|| RegimeWarning {
            system: "Lorenz",
            message: format!(
                "r = {} is not above {LORENZ_CHAOS_R_THRESHOLD}; trajectory may not be chaotic",
                self.r
            ),
        })
    }
}

/// Parameters of the Chen flow
/// `(a (v2 - v1), (c - a) v1 - v1 v3 + c v2, v1 v2 - b v3)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChenParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl ChenParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        require_positive("a", a)?;
        require_positive("b", b)?;
        require_positive("c", c)?;
        Ok(ChenParams { a, b, c })
    }

    pub fn regime_warning(&self) -> Option<RegimeWarning> {
        let chaotic = self.a == 35.0 && self.b == 3.0 && (20.0..=28.4).contains(&self.c);
        (!chaotic).then(|| RegimeWarning {
            system: "Chen",
            message: format!(
                "(a, b, c) = ({}, {}, {}) is outside a = 35, b = 3, 20 <= c <= 28.4; \
                 trajectory may not be chaotic",
                self.a, self.b, self.c
            ),
        })
    }
}

pub fn lorenz_deriv(state: &SystemState, p: &LorenzParams) -> Result<SystemState> {
    state.require_finite("Lorenz state")?;
    let SystemState { v1, v2, v3 } = *state;
    Ok(SystemState::new(
        p.sigma * (v2 - v1),
        p.r * v1 - v1 * v3 - v2,
        v1 * v2 - p.rho * v3,
    ))
}

pub fn chen_deriv(state: &SystemState, p: &ChenParams) -> Result<SystemState> {
    state.require_finite("Chen state")?;
    let SystemState { v1, v2, v3 } = *state;
    Ok(SystemState::new(
        p.a * (v2 - v1),
        (p.c - p.a) * v1 - v1 * v3 + p.c * v2,
        v1 * v2 - p.b * v3,
    ))
}

/// An autonomous three-dimensional flow.
pub trait ChaoticSystem {
    fn name(&self) -> &'static str;
    fn derivative(&self, state: &SystemState) -> Result<SystemState>;
}

impl ChaoticSystem for LorenzParams {
    fn name(&self) -> &'static str {
        "Lorenz"
    }

    fn derivative(&self, state: &SystemState) -> Result<SystemState> {
        lorenz_deriv(state, self)
    }
}

impl ChaoticSystem for ChenParams {
    fn name(&self) -> &'static str {
        "Chen"
    }

    fn derivative(&self, state: &SystemState) -> Result<SystemState> {
        chen_deriv(state, self)
    }
}

/// One classical four-stage Runge-Kutta step of size `h`.
///
/// Any non-finite intermediate or final coordinate is reported as
/// [`Error::IntegrationDiverged`].
pub fn rk4_step<F>(deriv: F, state: &SystemState, h: f64) -> Result<SystemState>
where
    F: Fn(&SystemState) -> Result<SystemState>,
{
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Param(format!("step size must be positive, got {h}")));
    }
    state.require_finite("initial state")?;

    let diverged = |e: Error| match e {
        Error::Domain(msg) => Error::IntegrationDiverged(msg),
        other => other,
    };
    let k1 = deriv(state).map_err(diverged)?;
    let k2 = deriv(&state.axpy(0.5 * h, k1)).map_err(diverged)?;
    let k3 = deriv(&state.axpy(0.5 * h, k2)).map_err(diverged)?;
    let k4 = deriv(&state.axpy(h, k3)).map_err(diverged)?;

    let sixth = h / 6.0;
    let next = SystemState::new(
        state.v1 + sixth * (k1.v1 + 2.0 * k2.v1 + 2.0 * k3.v1 + k4.v1),
        state.v2 + sixth * (k1.v2 + 2.0 * k2.v2 + 2.0 * k3.v2 + k4.v2),
        state.v3 + sixth * (k1.v3 + 2.0 * k2.v3 + 2.0 * k3.v3 + k4.v3),
    );
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::IntegrationDiverged(format!(
            "non-finite state {next} after step from {state}"
        )))
    }
}

/// Applies `n` consecutive RK4 steps of `system`.
pub fn advance<S: ChaoticSystem + ?Sized>(
    system: &S,
    state: &SystemState,
    n: u64,
    h: f64,
) -> Result<SystemState> {
    let mut current = *state;
    for step in 0..n {
        current = rk4_step(|s| system.derivative(s), &current, h).map_err(|e| match e {
            Error::IntegrationDiverged(msg) => Error::IntegrationDiverged(format!(
                "{} system, step {} of {n}: {msg}",
                system.name(),
                step + 1
            )),
            other => other,
        })?;
    }
    Ok(current)
}
