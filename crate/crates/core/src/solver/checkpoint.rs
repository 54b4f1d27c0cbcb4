//! Binary checkpoint layout (little-endian):
//!
//! ```text
//! magic   b"R2D1"
//! version u32
//! nx, ny  u64
//! lx, t   f64
//! rho, mx, my   nx·ny f64 each, row-major with y fastest
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::state::{FlowState, Grid};

pub const MAGIC: &[u8; 4] = b"R2D1";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 4 + 4 + 8 + 8 + 8 + 8;

pub fn encode<W: Write>(state: &FlowState, mut out: W) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(state.grid.nx as u64).to_le_bytes())?;
    out.write_all(&(state.grid.ny as u64).to_le_bytes())?;
    out.write_all(&state.grid.lx.to_le_bytes())?;
    out.write_all(&state.time.to_le_bytes())?;
    for field in [&state.rho, &state.mx, &state.my] {
        for v in field.iter() {
            out.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn decode<R: Read>(mut input: R) -> Result<FlowState> {
    let mut head = [0u8; HEADER_LEN];
    input.read_exact(&mut head).map_err(|e| Error::Format(format!("truncated header: {e}")))?;
    if &head[0..4] != MAGIC {
        return Err(Error::Format(format!("bad magic {:?}", &head[0..4])));
    }
    let word = |a: usize| -> [u8; 8] { head[a..a + 8].try_into().unwrap() };
    let version = u32::from_le_bytes(head[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let nx = u64::from_le_bytes(word(8)) as usize;
    let ny = u64::from_le_bytes(word(16)) as usize;
    let lx = f64::from_le_bytes(word(24));
    let time = f64::from_le_bytes(word(32));
    if nx == 0 || ny == 0 || nx.checked_mul(ny).is_none() {
        return Err(Error::Format(format!("bad grid size {nx} x {ny}")));
    }
    let n = nx * ny;
    let mut read_field = || -> Result<Vec<f64>> {
        let mut bytes = vec![0u8; n * 8];
        input.read_exact(&mut bytes).map_err(|e| Error::Format(format!("truncated field data: {e}")))?;
        Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
    };
    let rho = read_field()?;
    let mx = read_field()?;
    let my = read_field()?;
    Ok(FlowState { time, grid: Grid::new(nx, ny, lx), rho, mx, my })
}

pub fn write(path: impl AsRef<Path>, state: &FlowState) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    encode(state, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn read(path: impl AsRef<Path>) -> Result<FlowState> {
    decode(BufReader::new(File::open(path)?))
}
