//! Binary field snapshots: `FNS1`, `u32 n`, `f64 L`, `u8 kind`, then
//! little-endian `f64` values (complex as re, im).

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{MajorantField, PhysicalField, SpectralScalar, SpectralVectorField};
use crate::grid::FrequencyGrid;

const MAGIC: &[u8; 4] = b"FNS1";

#[derive(Clone, Debug, PartialEq)]
pub enum Snapshot {
    Scalar(SpectralScalar),
    Vector(SpectralVectorField),
    Majorant(MajorantField),
    Physical(PhysicalField),
}

impl Snapshot {
    fn kind(&self) -> u8 {
        match self {
            Snapshot::Scalar(_) => 0,
            Snapshot::Vector(_) => 1,
            Snapshot::Majorant(_) => 2,
            Snapshot::Physical(_) => 3,
        }
    }

    fn grid(&self) -> &FrequencyGrid {
        match self {
            Snapshot::Scalar(f) => &f.grid,
            Snapshot::Vector(f) => &f.grid,
            Snapshot::Majorant(f) => &f.grid,
            Snapshot::Physical(f) => &f.grid,
        }
    }
}

fn put_complex(out: &mut Vec<u8>, c: &[Complex64]) {
    for z in c {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
}

pub fn encode(s: &Snapshot) -> Vec<u8> {
    let g = s.grid();
    let mut out = Vec::with_capacity(17 + 48 * g.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(g.n() as u32).to_le_bytes());
    out.extend_from_slice(&g.length().to_le_bytes());
    out.push(s.kind());
    match s {
        Snapshot::Scalar(f) => put_complex(&mut out, &f.coeffs),
        Snapshot::Vector(f) => f.comps.iter().for_each(|c| put_complex(&mut out, c)),
        Snapshot::Majorant(f) => f.values.iter().for_each(|v| out.extend_from_slice(&v.to_le_bytes())),
        Snapshot::Physical(f) => put_complex(&mut out, &f.values),
    }
    out
}

fn bad(msg: &str) -> Error {
    Error::Snapshot(msg.into())
}

pub fn decode(bytes: &[u8]) -> Result<Snapshot> {
    if bytes.len() < 17 || &bytes[..4] != MAGIC {
        return Err(bad("missing FNS1 header"));
    }
    let n = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let length = f64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let grid = FrequencyGrid::new(n, length)?;
    let kind = bytes[16];
    let body = &bytes[17..];
    let count = match kind {
        0 | 3 => 2 * grid.len(),
        1 => 6 * grid.len(),
        2 => grid.len(),
        k => return Err(bad(&format!("unknown kind {k}"))),
    };
    if body.len() != 8 * count {
        return Err(bad(&format!("expected {} payload bytes, found {}", 8 * count, body.len())));
    }
    let vals: Vec<f64> = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    let complex = |v: &[f64]| -> Vec<Complex64> { v.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect() };
    Ok(match kind {
        0 => Snapshot::Scalar(SpectralScalar::new(&grid, complex(&vals))?),
        1 => {
            let m = 2 * grid.len();
            let comps = [complex(&vals[..m]), complex(&vals[m..2 * m]), complex(&vals[2 * m..])];
            Snapshot::Vector(SpectralVectorField::new(&grid, comps)?.detect_flags())
        }
        2 => Snapshot::Majorant(MajorantField::new(&grid, vals)?),
        _ => Snapshot::Physical(PhysicalField { grid, values: complex(&vals) }),
    })
}

pub fn write(mut w: impl Write, s: &Snapshot) -> std::io::Result<()> {
    w.write_all(&encode(s))
}

pub fn read(mut r: impl Read) -> Result<Snapshot> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf).map_err(|e| bad(&e.to_string()))?;
    decode(&buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::FieldRng;
    use proptest::prelude::*;

    #[test]
    fn rejects_garbage() {
        assert!(decode(b"FNS0").is_err());
        let grid = FrequencyGrid::new(8, 1.0).unwrap();
        let mut b = encode(&Snapshot::Majorant(MajorantField::zeros(&grid)));
        b.pop();
        assert!(decode(&b).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn round_trip(seed in any::<u64>(), kind in 0u8..4) {
            let grid = FrequencyGrid::new(8, 3.5).unwrap();
            let mut rng = FieldRng::new(seed);
            let s = match kind {
                0 => Snapshot::Scalar(rng.hermitian_scalar(&grid, 3, false)),
                1 => Snapshot::Vector(rng.divergence_free_field(&grid, 3, 0.7)),
                2 => Snapshot::Majorant(rng.majorant(&grid, 1.3, 2.0)),
                _ => Snapshot::Physical(rng.band_limited_physical(&grid, 2)),
            };
            let back = decode(&encode(&s)).unwrap();
            prop_assert_eq!(encode(&back), encode(&s));
        }
    }
}
