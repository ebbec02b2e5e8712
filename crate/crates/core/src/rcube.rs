//! `RCUB` binary tensor container.
//!
//! Layout, all little-endian:
//!
//! ```text
//! "RCUB" | version u32 | dtype u32 | rank u32 | dims u32 x rank
//!        | tag length u32 | tag UTF-8 bytes | payload
//! ```
//!
//! dtype 0 stores complex values as interleaved `(re, im)` f32 pairs, dtype 1
//! stores real f32. The payload is row-major with the last axis fastest. The
//! tag names the axes, e.g. `"frame,range,velocity,angle"`.

use std::io::{Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use ndarray::{ArrayD, ArrayView, Dimension, IxDyn};
use num_complex::{Complex32, Complex64};

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"RCUB";
pub const VERSION: u32 = 1;
const MAX_RANK: usize = 8;
const MAX_TAG: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Complex(ArrayD<Complex32>),
    Real(ArrayD<f32>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rcube {
    pub tag: String,
    pub payload: Payload,
}

impl Rcube {
    pub fn complex(tag: impl Into<String>, data: ArrayD<Complex32>) -> Self {
        Self {
            tag: tag.into(),
            payload: Payload::Complex(data),
        }
    }

    pub fn real(tag: impl Into<String>, data: ArrayD<f32>) -> Self {
        Self {
            tag: tag.into(),
            payload: Payload::Real(data),
        }
    }

    /// Narrows to f32.
    pub fn from_complex64<D: Dimension>(tag: impl Into<String>, data: ArrayView<Complex64, D>) -> Self {
        let narrow = data.map(|z| Complex32::new(z.re as f32, z.im as f32)).into_dyn();
        Self::complex(tag, narrow)
    }

    /// Narrows to f32.
    pub fn from_real64<D: Dimension>(tag: impl Into<String>, data: ArrayView<f64, D>) -> Self {
        Self::real(tag, data.map(|&x| x as f32).into_dyn())
    }

    pub fn shape(&self) -> &[usize] {
        match &self.payload {
            Payload::Complex(a) => a.shape(),
            Payload::Real(a) => a.shape(),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self.payload, Payload::Complex(_))
    }

    /// Widens to f64; real payloads get zero imaginary parts.
    pub fn to_complex64(&self) -> ArrayD<Complex64> {
        match &self.payload {
            Payload::Complex(a) => a.map(|z| Complex64::new(z.re as f64, z.im as f64)),
            Payload::Real(a) => a.map(|&x| Complex64::new(x as f64, 0.0)),
        }
    }

    /// Widens to f64; complex payloads are rejected.
    pub fn to_real64(&self) -> Result<ArrayD<f64>> {
        match &self.payload {
            Payload::Real(a) => Ok(a.map(|&x| x as f64)),
            Payload::Complex(_) => Err(Error::Format(format!(
                "expected a real tensor, `{}` is complex",
                self.tag
            ))),
        }
    }

    /// Checks rank and, when given, the axis tag.
    pub fn expect(&self, rank: usize, tag: Option<&str>) -> Result<()> {
        if self.shape().len() != rank {
            return Err(Error::shape(format!(
                "expected a rank-{rank} tensor, `{}` has shape {:?}",
                self.tag,
                self.shape()
            )));
        }
        if let Some(t) = tag {
            if self.tag != t {
                return Err(Error::Format(format!("expected axes `{t}`, found `{}`", self.tag)));
            }
        }
        Ok(())
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let shape = self.shape();
        if shape.len() > MAX_RANK || self.tag.len() > MAX_TAG {
            return Err(Error::Format("rank or tag length exceeds container limits".into()));
        }
        w.write_all(MAGIC)?;
        w.write_u32::<LittleEndian>(VERSION)?;
        w.write_u32::<LittleEndian>(if self.is_complex() { 0 } else { 1 })?;
        w.write_u32::<LittleEndian>(shape.len() as u32)?;
        for &d in shape {
            let d = u32::try_from(d).map_err(|_| Error::Format(format!("axis length {d} exceeds u32")))?;
            w.write_u32::<LittleEndian>(d)?;
        }
        w.write_u32::<LittleEndian>(self.tag.len() as u32)?;
        w.write_all(self.tag.as_bytes())?;
        let mut buf = Vec::new();
        match &self.payload {
            Payload::Complex(a) => {
                buf.reserve(a.len() * 8);
                for z in a.iter() {
                    buf.extend_from_slice(&z.re.to_le_bytes());
                    buf.extend_from_slice(&z.im.to_le_bytes());
                }
            }
            Payload::Real(a) => {
                buf.reserve(a.len() * 4);
                for x in a.iter() {
                    buf.extend_from_slice(&x.to_le_bytes());
                }
            }
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        self.write_to(&mut out)?;
        Ok(out)
    }

    /// Parses a complete container; trailing bytes are an error.
    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let truncated = |e: std::io::Error| {
            if e.kind() == std::io::ErrorKind::UnexpectedEof {
                Error::Format("container truncated".into())
            } else {
                Error::Io(e)
            }
        };
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(truncated)?;
        if &magic != MAGIC {
            return Err(Error::Format("bad magic, not an RCUB container".into()));
        }
        let version = r.read_u32::<LittleEndian>().map_err(truncated)?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported container version {version}")));
        }
        let dtype = r.read_u32::<LittleEndian>().map_err(truncated)?;
        let width = match dtype {
            0 => 8,
            1 => 4,
            other => return Err(Error::Format(format!("unknown dtype flag {other}"))),
        };
        let rank = r.read_u32::<LittleEndian>().map_err(truncated)? as usize;
        if rank > MAX_RANK {
            return Err(Error::Format(format!("rank {rank} exceeds {MAX_RANK}")));
        }
        let mut dims = Vec::with_capacity(rank);
        for _ in 0..rank {
            dims.push(r.read_u32::<LittleEndian>().map_err(truncated)? as usize);
        }
        let tag_len = r.read_u32::<LittleEndian>().map_err(truncated)? as usize;
        if tag_len > MAX_TAG {
            return Err(Error::Format(format!("tag length {tag_len} exceeds {MAX_TAG}")));
        }
        let mut tag = vec![0u8; tag_len];
        r.read_exact(&mut tag).map_err(truncated)?;
        let tag = String::from_utf8(tag).map_err(|_| Error::Format("tag is not UTF-8".into()))?;

        let count = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .and_then(|n| n.checked_mul(width).map(|bytes| (n, bytes)))
            .ok_or_else(|| Error::Format("payload size overflows".into()))?;
        let (n, bytes) = count;
        let mut payload = Vec::new();
        r.read_to_end(&mut payload)?;
        if payload.len() != bytes {
            return Err(Error::Format(format!(
                "payload holds {} bytes, dims {dims:?} need {bytes}",
                payload.len()
            )));
        }
        let f = |i: usize| f32::from_le_bytes(payload[4 * i..4 * i + 4].try_into().unwrap());
        let shape = IxDyn(&dims);
        let payload = if dtype == 0 {
            let v: Vec<_> = (0..n).map(|i| Complex32::new(f(2 * i), f(2 * i + 1))).collect();
            Payload::Complex(ArrayD::from_shape_vec(shape, v).expect("length checked"))
        } else {
            Payload::Real(ArrayD::from_shape_vec(shape, (0..n).map(f).collect()).expect("length checked"))
        };
        Ok(Self { tag, payload })
    }

    pub fn read_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(file))
    }

    pub fn write_path(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(file);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array3;

    #[test]
    fn header_bytes() {
        let c = Rcube::real("x", ArrayD::from_elem(IxDyn(&[2]), 1.5f32));
        let b = c.to_bytes().unwrap();
        assert_eq!(&b[..4], b"RCUB");
        assert_eq!(u32::from_le_bytes(b[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(b[8..12].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(b[12..16].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(b[16..20].try_into().unwrap()), 2);
        assert_eq!(u32::from_le_bytes(b[20..24].try_into().unwrap()), 1);
        assert_eq!(b[24], b'x');
        assert_eq!(&b[25..29], &1.5f32.to_le_bytes());
        assert_eq!(b.len(), 33);
    }

    #[test]
    fn complex_roundtrip_and_order() {
        let a = Array3::from_shape_fn((2, 3, 4), |(i, j, k)| {
            Complex64::new((i * 12 + j * 4 + k) as f64, -(k as f64))
        });
        let c = Rcube::from_complex64("a,b,c", a.view());
        let b = c.to_bytes().unwrap();
        // last axis fastest: element [0,0,1] directly follows [0,0,0]
        let body = &b[b.len() - 24 * 8..];
        assert_eq!(&body[8..12], &1.0f32.to_le_bytes());
        let back = Rcube::read_from(&b[..]).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_complex64().into_dimensionality::<ndarray::Ix3>().unwrap(), a);
    }

    #[test]
    fn rejects_corruption() {
        let c = Rcube::real("t", ArrayD::zeros(IxDyn(&[3, 2])));
        let good = c.to_bytes().unwrap();
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(Rcube::read_from(&bad[..]), Err(Error::Format(_))));
        let mut bad = good.clone();
        bad[4] = 2;
        assert!(Rcube::read_from(&bad[..]).is_err());
        let mut bad = good.clone();
        bad[8] = 7;
        assert!(Rcube::read_from(&bad[..]).is_err());
        assert!(Rcube::read_from(&good[..good.len() - 1]).is_err());
        let mut long = good.clone();
        long.push(0);
        assert!(Rcube::read_from(&long[..]).is_err());
        assert!(Rcube::read_from(&good[..10]).is_err());
        assert!(c.to_real64().is_ok() && c.expect(2, Some("t")).is_ok());
        assert!(c.expect(3, None).is_err() && c.expect(2, Some("u")).is_err());
    }

    #[test]
    fn empty_axis_is_allowed() {
        let c = Rcube::real("n", ArrayD::zeros(IxDyn(&[0, 5])));
        assert_eq!(Rcube::read_from(&c.to_bytes().unwrap()[..]).unwrap(), c);
    }
}
