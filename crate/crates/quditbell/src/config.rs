use std::env;

use anyhow::{bail, Context, Result};
use quditbell_core::set_amplitude_cap;

/// Overrides the amplitude cap of every state allocation.
pub const MAX_AMPLITUDES_ENV: &str = "QUDITBELL_MAX_AMPLITUDES";

/// Reads [`MAX_AMPLITUDES_ENV`] and installs it as the global cap.
/// Returns the value that was applied, if any.
pub fn apply_env() -> Result<Option<usize>> {
    let Some(raw) = env::var_os(MAX_AMPLITUDES_ENV) else {
        return Ok(None);
    };
    let raw = raw
        .into_string()
        .map_err(|_| anyhow::anyhow!("{MAX_AMPLITUDES_ENV} is not valid UTF-8"))?;
    let cap = parse_cap(&raw).with_context(|| format!("invalid {MAX_AMPLITUDES_ENV}={raw:?}"))?;
    set_amplitude_cap(cap);
    Ok(Some(cap))
}

/// Accepts a plain integer or a power of two written `2^k`.
pub fn parse_cap(raw: &str) -> Result<usize> {
    let raw = raw.trim();
    let cap = match raw.strip_prefix("2^") {
        Some(exp) => {
            let exp: u32 = exp.parse()?;
            1usize
                .checked_shl(exp)
                .filter(|_| exp < usize::BITS)
                .context("exponent too large")?
        }
        None => raw.parse()?,
    };
    if cap == 0 {
        bail!("cap must be positive");
    }
    Ok(cap)
}
