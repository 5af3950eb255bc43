//! The 13-component secret key and its text format.
//!
//! A key file holds one `name = value` pair per line. Blank lines and lines
//! starting with `#` are ignored. All thirteen key names are required and
//! may appear once each. An optional `h` line sets the integration step; it
//! configures the generator but is not part of the key.

use std::fmt;
use std::str::FromStr;

use crate::chaos::{ChenParams, LorenzParams, RegimeWarning, SystemState, DEFAULT_STEP};
use crate::error::{Error, Result};

/// Key file names in canonical order.
pub const KEY_FIELD_NAMES: [&str; 13] = [
    "x1_0", "x2_0", "x3_0", "sigma", "rho", "r", "y1_0", "y2_0", "y3_0", "a", "b", "c", "t",
];

const STEP_FIELD: &str = "h";

/// Transient iterations discarded by the reference configuration.
pub const DEFAULT_TRANSIENT: u64 = 4000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecretKey {
    pub x1_0: f64,
    pub x2_0: f64,
    pub x3_0: f64,
    pub sigma: f64,
    pub rho: f64,
    pub r: f64,
    pub y1_0: f64,
    pub y2_0: f64,
    pub y3_0: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Number of RK4 iterations discarded before the first output bit.
    pub t: u64,
}

/// One scalar component of a [`SecretKey`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KeyComponent {
    X1,
    X2,
    X3,
    Sigma,
    Rho,
    R,
    Y1,
    Y2,
    Y3,
    A,
    B,
    C,
    Transient,
}

impl KeyComponent {
    pub const ALL: [KeyComponent; 13] = [
        KeyComponent::X1,
        KeyComponent::X2,
        KeyComponent::X3,
        KeyComponent::Sigma,
        KeyComponent::Rho,
        KeyComponent::R,
        KeyComponent::Y1,
        KeyComponent::Y2,
        KeyComponent::Y3,
        KeyComponent::A,
        KeyComponent::B,
        KeyComponent::C,
        KeyComponent::Transient,
    ];

    /// The twelve real-valued components.
    pub fn reals() -> impl Iterator<Item = KeyComponent> {
        Self::ALL
            .into_iter()
            .filter(|c| *c != KeyComponent::Transient)
    }

    pub fn name(self) -> &'static str {
        KEY_FIELD_NAMES[self as usize]
    }

    pub fn from_name(name: &str) -> Option<Self> {
        KEY_FIELD_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| Self::ALL[i])
    }
}

impl fmt::Display for KeyComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl SecretKey {
    /// The reference seed: X(0) = (13.3604, 7.2052, 21.5026), sigma = 10,
    /// rho = 8/3, r = 28; Y(0) = (-10.058, 0.368, 37.368), a = 35, b = 3,
    /// c = 28; t = 4000.
    pub fn reference() -> Self {
        SecretKey {
            x1_0: 13.3604,
            x2_0: 7.2052,
            x3_0: 21.5026,
            sigma: 10.0,
            rho: 8.0 / 3.0,
            r: 28.0,
            y1_0: -10.058,
            y2_0: 0.368,
            y3_0: 37.368,
            a: 35.0,
            b: 3.0,
            c: 28.0,
            t: DEFAULT_TRANSIENT,
        }
    }

    /// Checks that all real components are finite and that system
    /// parameters are strictly positive.
    pub fn validate(&self) -> Result<()> {
        for comp in KeyComponent::reals() {
            let v = self.real(comp).expect("real component");
            if !v.is_finite() {
                return Err(Error::Key(format!("{comp} is not finite: {v}")));
            }
        }
        self.lorenz_params()?;
        self.chen_params()?;
        Ok(())
    }

    pub fn lorenz_params(&self) -> Result<LorenzParams> {
        LorenzParams::new(self.sigma, self.r, self.rho)
    }

    pub fn chen_params(&self) -> Result<ChenParams> {
        ChenParams::new(self.a, self.b, self.c)
    }

    pub fn lorenz_initial(&self) -> SystemState {
        SystemState::new(self.x1_0, self.x2_0, self.x3_0)
    }

    pub fn chen_initial(&self) -> SystemState {
        SystemState::new(self.y1_0, self.y2_0, self.y3_0)
    }

    pub fn regime_warnings(&self) -> Vec<RegimeWarning> {
        let mut out = Vec::new();
        if let Ok(p) = self.lorenz_params() {
            out.extend(p.regime_warning());
        }
        if let Ok(p) = self.chen_params() {
            out.extend(p.regime_warning());
        }
        out
    }

    /// Value of a real component; `None` for the transient count.
    pub fn real(&self, comp: KeyComponent) -> Option<f64> {
        use KeyComponent::*;
        Some(match comp {
            X1 => self.x1_0,
            X2 => self.x2_0,
            X3 => self.x3_0,
            Sigma => self.sigma,
            Rho => self.rho,
            R => self.r,
            Y1 => self.y1_0,
            Y2 => self.y2_0,
            Y3 => self.y3_0,
            A => self.a,
            B => self.b,
            C => self.c,
            Transient => return None,
        })
    }

    fn real_mut(&mut self, comp: KeyComponent) -> Option<&mut f64> {
        use KeyComponent::*;
        Some(match comp {
            X1 => &mut self.x1_0,
            X2 => &mut self.x2_0,
            X3 => &mut self.x3_0,
            Sigma => &mut self.sigma,
            Rho => &mut self.rho,
            R => &mut self.r,
            Y1 => &mut self.y1_0,
            Y2 => &mut self.y2_0,
            Y3 => &mut self.y3_0,
            A => &mut self.a,
            B => &mut self.b,
            C => &mut self.c,
            Transient => return None,
        })
    }

    /// A copy with one component nudged: real components get `+ delta`, the
    /// transient count gets `+ 1` regardless of `delta`.
    pub fn perturbed(&self, comp: KeyComponent, delta: f64) -> SecretKey {
        let mut key = *self;
        match key.real_mut(comp) {
            Some(v) => *v += delta,
            None => key.t += 1,
        }
        key
    }

    /// Canonical key file text. Real values use the shortest decimal that
    /// parses back to the identical double.
    pub fn to_key_file(&self) -> String {
        let mut out = String::new();
        for comp in KeyComponent::ALL {
            match self.real(comp) {
                Some(v) => out.push_str(&format!("{} = {v:?}\n", comp.name())),
                None => out.push_str(&format!("{} = {}\n", comp.name(), self.t)),
            }
        }
        out
    }
}

impl Default for SecretKey {
    fn default() -> Self {
        SecretKey::reference()
    }
}

impl fmt::Display for SecretKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_key_file())
    }
}

/// A parsed key file: the secret key plus the non-secret step size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KeyFile {
    pub key: SecretKey,
    pub step: f64,
}

impl KeyFile {
    pub fn parse(text: &str) -> Result<Self> {
        parse_key_text(text, true)
    }

    pub fn to_text(&self) -> String {
        let mut out = self.key.to_key_file();
        if self.step != DEFAULT_STEP {
            out.push_str(&format!("{STEP_FIELD} = {:?}\n", self.step));
        }
        out
    }
}

impl FromStr for SecretKey {
    type Err = Error;

    /// Parses key file text; an `h` line is rejected here because it is not
    /// part of the key.
    fn from_str(s: &str) -> Result<Self> {
        parse_key_text(s, false).map(|kf| kf.key)
    }
}

fn parse_key_text(text: &str, allow_step: bool) -> Result<KeyFile> {
    let mut reals: [Option<f64>; 12] = [None; 12];
    let mut transient: Option<u64> = None;
    let mut step: Option<f64> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = lineno + 1;
        let (name, value) = line.split_once('=').ok_or_else(|| {
            Error::Key(format!(
                "line {lineno}: expected `name = value`, got {line:?}"
            ))
        })?;
        let (name, value) = (name.trim(), value.trim());

        if allow_step && name == STEP_FIELD {
            if step.is_some() {
                return Err(Error::Key(format!("line {lineno}: duplicate field {name}")));
            }
            let h = parse_real(name, value, lineno)?;
            if h.is_nan() || h <= 0.0 {
                return Err(Error::Key(format!(
                    "line {lineno}: step h must be positive"
                )));
            }
            step = Some(h);
            continue;
        }

        let comp = KeyComponent::from_name(name)
            .ok_or_else(|| Error::Key(format!("line {lineno}: unknown key field {name:?}")))?;
        if comp == KeyComponent::Transient {
            if transient.is_some() {
                return Err(Error::Key(format!("line {lineno}: duplicate field t")));
            }
            transient = Some(value.parse::<u64>().map_err(|_| {
                Error::Key(format!(
                    "line {lineno}: t must be a non-negative integer, got {value:?}"
                ))
            })?);
        } else {
            let slot = &mut reals[comp as usize];
            if slot.is_some() {
                return Err(Error::Key(format!("line {lineno}: duplicate field {name}")));
            }
            *slot = Some(parse_real(name, value, lineno)?);
        }
    }

    let missing: Vec<&str> = KeyComponent::ALL
        .iter()
        .filter(|c| match c {
            KeyComponent::Transient => transient.is_none(),
            other => reals[**other as usize].is_none(),
        })
        .map(|c| c.name())
        .collect();
    if !missing.is_empty() {
        return Err(Error::Key(format!(
            "missing field(s): {}",
            missing.join(", ")
        )));
    }

    let v = |c: KeyComponent| reals[c as usize].expect("checked above");
    use KeyComponent::*;
    let key = SecretKey {
        x1_0: v(X1),
        x2_0: v(X2),
        x3_0: v(X3),
        sigma: v(Sigma),
        rho: v(Rho),
        r: v(R),
        y1_0: v(Y1),
        y2_0: v(Y2),
        y3_0: v(Y3),
        a: v(A),
        b: v(B),
        c: v(C),
        t: transient.expect("checked above"),
    };
    key.validate()?;
    Ok(KeyFile {
        key,
        step: step.unwrap_or(DEFAULT_STEP),
    })
}

fn parse_real(name: &str, value: &str, lineno: usize) -> Result<f64> {
    let v: f64 = value
        .parse()
        .map_err(|_| Error::Key(format!("line {lineno}: {name} is not a decimal: {value:?}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Key(format!("line {lineno}: {name} is not finite")))
    }
}

/// Base-2 logarithm of `t * 10^(12 * precision_exponent)`: twelve real
/// components each resolvable to `10^-precision_exponent`, times the
/// transient count.
pub fn key_space_bits(precision_exponent: u32, t: u64) -> Result<f64> {
    if precision_exponent < 1 {
        return Err(Error::Param("precision exponent must be at least 1".into()));
    }
    if t < 1 {
        return Err(Error::Param("transient count must be at least 1".into()));
    }
    Ok((t as f64).log2() + 12.0 * f64::from(precision_exponent) * 10f64.log2())
}
