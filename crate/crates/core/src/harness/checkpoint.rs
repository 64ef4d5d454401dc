//! Binary checkpoints.
//!
//! Layout (little endian): magic `OSCF1`, equation kind (`u8`, 0 = NS,
//! 1 = SQG), dimension (`u8`), components (`u8`), `n` (`u32`), `α`, `N`,
//! time (`f64` each), step count (`u64`), then one `(re, im)` pair of `f64`
//! per coefficient, component-major, modes in row-major index order.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::dynamics::{Health, SimulationConfig, SimulationState};
use crate::equation::EquationKind;
use crate::error::{domain, Error, Result};
use crate::spectral::{SpectralField, TorusGrid};

pub const MAGIC: &[u8; 5] = b"OSCF1";
const HEADER_LEN: usize = 5 + 3 + 4 + 3 * 8 + 8;

/// A stored state with the metadata needed to continue it.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub equation: EquationKind,
    pub alpha: f64,
    pub n_multiplier: f64,
    pub state: SimulationState,
}

pub fn encode_checkpoint(cfg: &SimulationConfig, state: &SimulationState) -> Result<Vec<u8>> {
    if state.health != Health::Ok {
        return Err(domain(format!("refusing to checkpoint a {} state", state.health.as_str())));
    }
    let field = &state.field;
    let grid = field.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * field.coefficients().len());
    out.extend_from_slice(MAGIC);
    out.push(match cfg.equation {
        EquationKind::Ns => 0,
        EquationKind::Sqg => 1,
    });
    out.push(grid.dim() as u8);
    out.push(field.components() as u8);
    out.extend_from_slice(&(grid.n() as u32).to_le_bytes());
    out.extend_from_slice(&cfg.alpha.to_le_bytes());
    out.extend_from_slice(&cfg.profile.n_multiplier().to_le_bytes());
    out.extend_from_slice(&state.time.to_le_bytes());
    out.extend_from_slice(&state.step_count.to_le_bytes());
    for c in field.coefficients() {
        out.extend_from_slice(&c.re.to_le_bytes());
        out.extend_from_slice(&c.im.to_le_bytes());
    }
    Ok(out)
}

pub fn persist_checkpoint(path: &Path, cfg: &SimulationConfig, state: &SimulationState) -> Result<()> {
    let bytes = encode_checkpoint(cfg, state)?;
    let mut file = std::fs::File::create(path)?;
    file.write_all(&bytes)?;
    Ok(())
}

struct Reader<'a> {
    bytes: &'a [u8],
    offset: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize, what: &str) -> Result<&'a [u8]> {
        let end = self.offset + len;
        if end > self.bytes.len() {
            return Err(Error::Checkpoint {
                offset: self.bytes.len(),
                message: format!("file truncated while reading {what}"),
            });
        }
        let out = &self.bytes[self.offset..end];
        self.offset = end;
        Ok(out)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().expect("8 bytes")))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().expect("8 bytes")))
    }
}

fn bad(offset: usize, message: impl Into<String>) -> Error {
    Error::Checkpoint {
        offset,
        message: message.into(),
    }
}

pub fn decode_checkpoint(bytes: &[u8]) -> Result<Checkpoint> {
    let mut r = Reader { bytes, offset: 0 };
    if r.take(MAGIC.len(), "magic")? != MAGIC {
        return Err(bad(0, "bad magic, not an OSCF1 checkpoint"));
    }
    let at = r.offset;
    let equation = match r.u8("equation kind")? {
        0 => EquationKind::Ns,
        1 => EquationKind::Sqg,
        other => return Err(bad(at, format!("unknown equation kind {other}"))),
    };
    let at = r.offset;
    let dim = r.u8("dimension")? as usize;
    let at_comps = r.offset;
    let components = r.u8("components")? as usize;
    let at_n = r.offset;
    let n = r.u32("grid size")? as usize;
    let grid = TorusGrid::new(dim, n).map_err(|e| bad(at, format!("invalid grid: {e}")))?;
    let expected = match equation {
        EquationKind::Sqg => 1,
        EquationKind::Ns => dim,
    };
    if components != expected {
        return Err(bad(at_comps, format!("{components} components do not fit {equation}")));
    }
    let alpha = r.f64("alpha")?;
    let n_multiplier = r.f64("N")?;
    let at_time = r.offset;
    let time = r.f64("time")?;
    if !(time >= 0.0) || !time.is_finite() {
        return Err(bad(at_time, format!("invalid time {time}")));
    }
    let step_count = r.u64("step count")?;
    let count = components
        .checked_mul(grid.len())
        .ok_or_else(|| bad(at_n, "grid too large"))?;
    let mut coeffs = Vec::with_capacity(count);
    for _ in 0..count {
        let re = r.f64("coefficients")?;
        let im = r.f64("coefficients")?;
        coeffs.push(Complex64::new(re, im));
    }
    if r.offset != bytes.len() {
        return Err(bad(r.offset, format!("{} trailing bytes", bytes.len() - r.offset)));
    }
    let field = SpectralField::from_coefficients(grid, components, coeffs)?;
    Ok(Checkpoint {
        equation,
        alpha,
        n_multiplier,
        state: SimulationState {
            time,
            field,
            step_count,
            health: Health::Ok,
        },
    })
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    decode_checkpoint(&std::fs::read(path)?)
}
