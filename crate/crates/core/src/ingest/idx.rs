//! IDX tensors (the MNIST container).
//!
//! Layout: a big-endian magic `00 00 TT DD` where `TT` is the element type and
//! `DD` the number of dimensions, then `DD` big-endian `u32` sizes, then the
//! row-major payload with multi-byte elements stored big-endian.

use crate::error::{Error, Result};

use super::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    U8,
    I8,
    I16,
    I32,
    F32,
    F64,
}

impl ElementKind {
    pub fn from_code(code: u8) -> Option<Self> {
        Some(match code {
            0x08 => Self::U8,
            0x09 => Self::I8,
            0x0B => Self::I16,
            0x0C => Self::I32,
            0x0D => Self::F32,
            0x0E => Self::F64,
            _ => return None,
        })
    }

    pub fn code(self) -> u8 {
        match self {
            Self::U8 => 0x08,
            Self::I8 => 0x09,
            Self::I16 => 0x0B,
            Self::I32 => 0x0C,
            Self::F32 => 0x0D,
            Self::F64 => 0x0E,
        }
    }

    pub fn size(self) -> usize {
        match self {
            Self::U8 | Self::I8 => 1,
            Self::I16 => 2,
            Self::I32 | Self::F32 => 4,
            Self::F64 => 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum IdxData {
    U8(Vec<u8>),
    I8(Vec<i8>),
    I16(Vec<i16>),
    I32(Vec<i32>),
    F32(Vec<f32>),
    F64(Vec<f64>),
}

impl IdxData {
    pub fn kind(&self) -> ElementKind {
        match self {
            Self::U8(_) => ElementKind::U8,
            Self::I8(_) => ElementKind::I8,
            Self::I16(_) => ElementKind::I16,
            Self::I32(_) => ElementKind::I32,
            Self::F32(_) => ElementKind::F32,
            Self::F64(_) => ElementKind::F64,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Self::U8(v) => v.len(),
            Self::I8(v) => v.len(),
            Self::I16(v) => v.len(),
            Self::I32(v) => v.len(),
            Self::F32(v) => v.len(),
            Self::F64(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Element `i` widened to `f64`.
    pub fn get_f64(&self, i: usize) -> f64 {
        match self {
            Self::U8(v) => v[i] as f64,
            Self::I8(v) => v[i] as f64,
            Self::I16(v) => v[i] as f64,
            Self::I32(v) => v[i] as f64,
            Self::F32(v) => v[i] as f64,
            Self::F64(v) => v[i],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdxTensor {
    pub dims: Vec<usize>,
    pub data: IdxData,
}

impl IdxTensor {
    pub fn new(dims: Vec<usize>, data: IdxData) -> Result<Self> {
        let count = dims.iter().product::<usize>();
        if count != data.len() {
            return Err(Error::DimensionMismatch { expected: count, actual: data.len() });
        }
        Ok(Self { dims, data })
    }

    pub fn element_kind(&self) -> ElementKind {
        self.data.kind()
    }

    /// Splits a `u8` tensor of shape `[count, rows, cols]` into images.
    pub fn to_images(&self) -> Result<Vec<GrayImage>> {
        let IdxData::U8(bytes) = &self.data else {
            return Err(Error::Malformed(format!("image tensor must hold u8, found {:?}", self.element_kind())));
        };
        let &[count, height, width] = self.dims.as_slice() else {
            return Err(Error::Malformed(format!("image tensor must be 3-D, found dims {:?}", self.dims)));
        };
        let size = width * height;
        Ok((0..count)
            .map(|k| GrayImage {
                width,
                height,
                maxval: 255,
                pixels: bytes[k * size..(k + 1) * size].to_vec(),
            })
            .collect())
    }

    /// Reads a 1-D integer tensor as class labels.
    pub fn to_labels(&self) -> Result<Vec<u32>> {
        if self.dims.len() != 1 {
            return Err(Error::Malformed(format!("label tensor must be 1-D, found dims {:?}", self.dims)));
        }
        let labels: Option<Vec<u32>> = match &self.data {
            IdxData::U8(v) => Some(v.iter().map(|&b| b as u32).collect()),
            IdxData::I8(v) => v.iter().map(|&b| u32::try_from(b).ok()).collect(),
            IdxData::I16(v) => v.iter().map(|&b| u32::try_from(b).ok()).collect(),
            IdxData::I32(v) => v.iter().map(|&b| u32::try_from(b).ok()).collect(),
            IdxData::F32(_) | IdxData::F64(_) => None,
        };
        labels.ok_or_else(|| Error::Malformed("labels must be non-negative integers".into()))
    }
}

pub fn parse_idx(bytes: &[u8]) -> Result<IdxTensor> {
    if bytes.len() < 4 {
        return Err(Error::IdxTruncatedHeader { needed: 4, available: bytes.len() });
    }
    if bytes[0] != 0 || bytes[1] != 0 {
        return Err(Error::IdxBadMagic(bytes[0], bytes[1]));
    }
    let kind = ElementKind::from_code(bytes[2]).ok_or(Error::IdxUnknownType(bytes[2]))?;
    let ndims = bytes[3] as usize;
    let header_len = 4 + 4 * ndims;
    if bytes.len() < header_len {
        return Err(Error::IdxTruncatedHeader { needed: header_len, available: bytes.len() });
    }
    let dims: Vec<usize> = bytes[4..header_len]
        .chunks_exact(4)
        .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]) as usize)
        .collect();

    let payload = &bytes[header_len..];
    let expected = dims
        .iter()
        .try_fold(kind.size(), |acc, &d| acc.checked_mul(d))
        .ok_or(Error::IdxPayloadMismatch { expected: usize::MAX, actual: payload.len() })?;
    if payload.len() != expected {
        return Err(Error::IdxPayloadMismatch { expected, actual: payload.len() });
    }

    let data = match kind {
        ElementKind::U8 => IdxData::U8(payload.to_vec()),
        ElementKind::I8 => IdxData::I8(payload.iter().map(|&b| b as i8).collect()),
        ElementKind::I16 => {
            IdxData::I16(payload.chunks_exact(2).map(|c| i16::from_be_bytes([c[0], c[1]])).collect())
        }
        ElementKind::I32 => IdxData::I32(
            payload.chunks_exact(4).map(|c| i32::from_be_bytes(c.try_into().unwrap())).collect(),
        ),
        ElementKind::F32 => IdxData::F32(
            payload.chunks_exact(4).map(|c| f32::from_be_bytes(c.try_into().unwrap())).collect(),
        ),
        ElementKind::F64 => IdxData::F64(
            payload.chunks_exact(8).map(|c| f64::from_be_bytes(c.try_into().unwrap())).collect(),
        ),
    };
    Ok(IdxTensor { dims, data })
}

/// Inverse of [`parse_idx`]; used to build fixtures.
pub fn serialize_idx(tensor: &IdxTensor) -> Vec<u8> {
    let mut out = vec![0, 0, tensor.element_kind().code(), tensor.dims.len() as u8];
    for &d in &tensor.dims {
        out.extend_from_slice(&(d as u32).to_be_bytes());
    }
    match &tensor.data {
        IdxData::U8(v) => out.extend_from_slice(v),
        IdxData::I8(v) => out.extend(v.iter().map(|&x| x as u8)),
        IdxData::I16(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_be_bytes())),
        IdxData::I32(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_be_bytes())),
        IdxData::F32(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_be_bytes())),
        IdxData::F64(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_be_bytes())),
    }
    out
}
