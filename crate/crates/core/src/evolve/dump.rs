//! Binary dump of `|ψ|²` frames.
//!
//! Layout: the 8-byte magic `DSTPSI1\0`, the point count `N` as a
//! little-endian `u64`, then one row of `N` little-endian `f64` per frame.

use std::io::{self, Read, Write};

use crate::packet::WavePacket;
use crate::scalar::Real;

pub const MAGIC: &[u8; 8] = b"DSTPSI1\0";

pub fn write_header<W: Write>(mut w: W, n: usize) -> io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(n as u64).to_le_bytes())
}

pub fn write_frame<W: Write, T: Real>(mut w: W, psi: &WavePacket<T>) -> io::Result<()> {
    for z in psi.samples() {
        w.write_all(&z.norm_sqr().as_f64().to_le_bytes())?;
    }
    Ok(())
}

/// Write the header and every frame. All packets must share one grid size.
pub fn write_frames<'a, W, T, I>(mut w: W, frames: I) -> io::Result<()>
where
    W: Write,
    T: Real,
    I: IntoIterator<Item = &'a WavePacket<T>>,
{
    let mut frames = frames.into_iter().peekable();
    let n = frames.peek().map_or(0, |p| p.len());
    write_header(&mut w, n)?;
    for psi in frames {
        if psi.len() != n {
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                "frames differ in grid size",
            ));
        }
        write_frame(&mut w, psi)?;
    }
    Ok(())
}

/// Read a dump back as `(N, frames)`.
pub fn read_frames<R: Read>(mut r: R) -> io::Result<(usize, Vec<Vec<f64>>)> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    if &header[..8] != MAGIC {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "bad magic"));
    }
    let n = u64::from_le_bytes(header[8..].try_into().expect("8 bytes")) as usize;
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    if body.len() % (8 * n) != 0 {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "truncated frame"));
    }
    let frames = body
        .chunks_exact(8 * n)
        .map(|row| {
            row.chunks_exact(8)
                .map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes")))
                .collect()
        })
        .collect();
    Ok((n, frames))
}
