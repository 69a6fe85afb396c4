//! Byte serialization of series: a one-line JSON header followed by the
//! coefficients as `d` little-endian 8-byte words each.

use serde::{Deserialize, Serialize};

use super::LaurentSeries;
use crate::error::{Error, Result};
use crate::padic::{make_ring, RingParams};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesHeader {
    pub spec: RingParams,
    pub v: i64,
    #[serde(rename = "N")]
    pub n: i64,
    pub label: String,
    pub digits: u32,
}

pub(crate) fn intern_label(label: &str) -> &'static str {
    match label {
        "q0" => "q0",
        "q_i" => "q_i",
        "t" => "t",
        "t_i" => "t_i",
        "u" => "u",
        _ => "q",
    }
}

impl LaurentSeries {
    pub fn header(&self) -> SeriesHeader {
        SeriesHeader {
            spec: self.ring.params(),
            v: self.val,
            n: self.order,
            label: self.label.to_string(),
            digits: self.digits,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec(&self.header()).expect("header serializes");
        out.push(b'\n');
        for &w in &self.coeffs {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<LaurentSeries> {
        let nl = bytes
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::Precondition("missing series header".into()))?;
        let header: SeriesHeader = serde_json::from_slice(&bytes[..nl])?;
        let ring = make_ring(header.spec.p, header.spec.d, header.spec.m)?;
        let body = &bytes[nl + 1..];
        let len = (header.n - header.v).max(0) as usize * header.spec.d;
        if body.len() != len * 8 {
            return Err(Error::Precondition(format!(
                "series body has {} bytes, expected {}",
                body.len(),
                len * 8
            )));
        }
        let coeffs: Vec<u64> = body.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().unwrap())).collect();
        if coeffs.iter().any(|&w| w >= ring.modulus()) {
            return Err(Error::Precondition("series coefficient out of range".into()));
        }
        Ok(LaurentSeries::from_flat(&ring, header.v, coeffs, header.n, header.digits)
            .with_label(intern_label(&header.label)))
    }
}
