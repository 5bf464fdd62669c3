//! Binary checkpoint container.
//!
//! Layout: the magic `OPF` followed by a format version byte (`1`), a
//! little-endian `u32` header length, the header as UTF-8 `key=value`
//! lines, every tensor as little-endian `f64` in declaration order, and a
//! trailing little-endian CRC32 of all preceding bytes.

use std::fs;
use std::path::Path;

use super::{ModelConfig, ModelParams, NeuralError};
use crate::scalar::Scalar;

const MAGIC: &[u8; 3] = b"OPF";
pub const FORMAT_VERSION: u8 = b'1';

pub fn encode_checkpoint<T: Scalar>(
    params: &ModelParams<T>,
    config: &ModelConfig,
) -> Result<Vec<u8>, NeuralError> {
    params.check_shape(config)?;
    let header = format!(
        "vocab_size={}\nembed_dim={}\nattention_dim={}\nhidden_dim={}\nwindow_len={}\nrng_seed={}\n",
        config.vocab_size,
        config.embed_dim,
        config.attention_dim,
        config.hidden_dim,
        config.window_len,
        config.rng_seed
    );
    let mut out = Vec::with_capacity(12 + header.len() + params.param_count() * 8);
    out.extend_from_slice(MAGIC);
    out.push(FORMAT_VERSION);
    out.extend_from_slice(&(header.len() as u32).to_le_bytes());
    out.extend_from_slice(header.as_bytes());
    for tensor in params.tensors() {
        for v in tensor {
            out.extend_from_slice(&v.as_f64().to_le_bytes());
        }
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    Ok(out)
}

pub fn decode_checkpoint<T: Scalar>(
    bytes: &[u8],
) -> Result<(ModelParams<T>, ModelConfig), NeuralError> {
    if bytes.len() < 4 || &bytes[..3] != MAGIC {
        return Err(NeuralError::MalformedCheckpoint("missing magic".into()));
    }
    if bytes[3] != FORMAT_VERSION {
        return Err(NeuralError::VersionMismatch {
            found: bytes[3],
            expected: FORMAT_VERSION,
        });
    }
    if bytes.len() < 12 {
        return Err(NeuralError::ChecksumMismatch);
    }
    let (body, crc) = bytes.split_at(bytes.len() - 4);
    if crc32fast::hash(body) != u32::from_le_bytes(crc.try_into().expect("4 bytes")) {
        return Err(NeuralError::ChecksumMismatch);
    }
    let header_len = u32::from_le_bytes(body[4..8].try_into().expect("4 bytes")) as usize;
    let header = body
        .get(8..8 + header_len)
        .and_then(|h| std::str::from_utf8(h).ok())
        .ok_or_else(|| NeuralError::MalformedCheckpoint("bad header".into()))?;
    let config = parse_header(header)?;
    config.validate()?;
    let mut params = ModelParams::<T>::zeros(&config);
    let mut data = body[8 + header_len..].chunks_exact(8);
    if data.len() != params.param_count() || !data.remainder().is_empty() {
        return Err(NeuralError::MalformedCheckpoint(
            "tensor data does not match the header".into(),
        ));
    }
    for tensor in params.tensors_mut() {
        for (v, chunk) in tensor.iter_mut().zip(&mut data) {
            *v = T::of(f64::from_le_bytes(chunk.try_into().expect("8 bytes")));
        }
    }
    Ok((params, config))
}

fn parse_header(header: &str) -> Result<ModelConfig, NeuralError> {
    let mut config = ModelConfig::new(0);
    let mut seen = 0u8;
    for line in header.lines().filter(|l| !l.is_empty()) {
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| NeuralError::MalformedCheckpoint(format!("header line {line:?}")))?;
        let bad = || NeuralError::MalformedCheckpoint(format!("header value {line:?}"));
        let dim = || value.parse::<usize>().map_err(|_| bad());
        match key {
            "vocab_size" => config.vocab_size = dim()?,
            "embed_dim" => config.embed_dim = dim()?,
            "attention_dim" => config.attention_dim = dim()?,
            "hidden_dim" => config.hidden_dim = dim()?,
            "window_len" => config.window_len = dim()?,
            "rng_seed" => config.rng_seed = value.parse().map_err(|_| bad())?,
            _ => continue,
        }
        seen += 1;
    }
    if seen < 6 {
        return Err(NeuralError::MalformedCheckpoint("incomplete header".into()));
    }
    Ok(config)
}

pub fn save_checkpoint<T: Scalar>(
    params: &ModelParams<T>,
    config: &ModelConfig,
    path: &Path,
) -> Result<(), NeuralError> {
    let bytes = encode_checkpoint(params, config)?;
    fs::write(path, bytes).map_err(|e| NeuralError::io(path, e))
}

pub fn load_checkpoint<T: Scalar>(path: &Path) -> Result<(ModelParams<T>, ModelConfig), NeuralError> {
    let bytes = fs::read(path).map_err(|e| NeuralError::io(path, e))?;
    decode_checkpoint(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::init_params;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sample() -> (ModelParams<f64>, ModelConfig) {
        let config = ModelConfig {
            vocab_size: 11,
            embed_dim: 4,
            attention_dim: 3,
            hidden_dim: 6,
            window_len: 7,
            rng_seed: 42,
        };
        let mut p: ModelParams<f64> = init_params(&config, &mut ChaCha8Rng::seed_from_u64(42));
        p.b_out[2] = -0.0;
        p.b_lstm[5] = f64::MIN_POSITIVE / 4.0;
        (p, config)
    }

    fn bits(p: &ModelParams<f64>) -> Vec<u64> {
        p.tensors().iter().flat_map(|t| t.iter().map(|v| v.to_bits())).collect()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let (p, c) = sample();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.ckpt");
        save_checkpoint(&p, &c, &path).unwrap();
        let (q, d) = load_checkpoint::<f64>(&path).unwrap();
        assert_eq!(bits(&p), bits(&q));
        assert_eq!(c, d);
    }

    #[test]
    fn truncation_is_a_checksum_failure() {
        let (p, c) = sample();
        let bytes = encode_checkpoint(&p, &c).unwrap();
        for cut in [bytes.len() - 1, bytes.len() / 2, 9] {
            assert!(matches!(
                decode_checkpoint::<f64>(&bytes[..cut]),
                Err(NeuralError::ChecksumMismatch)
            ));
        }
    }

    #[test]
    fn bumped_version_is_rejected() {
        let (p, c) = sample();
        let mut bytes = encode_checkpoint(&p, &c).unwrap();
        bytes[3] = b'2';
        assert!(matches!(
            decode_checkpoint::<f64>(&bytes),
            Err(NeuralError::VersionMismatch { found: b'2', .. })
        ));
    }

    #[test]
    fn flipped_bit_is_detected() {
        let (p, c) = sample();
        let mut bytes = encode_checkpoint(&p, &c).unwrap();
        let mid = bytes.len() / 2;
        bytes[mid] ^= 0x10;
        assert!(matches!(
            decode_checkpoint::<f64>(&bytes),
            Err(NeuralError::ChecksumMismatch)
        ));
    }

    #[test]
    fn missing_file_is_io_failure() {
        let err = load_checkpoint::<f64>(Path::new("/nonexistent/x.ckpt")).unwrap_err();
        assert!(matches!(err, NeuralError::IoFailure { .. }));
    }
}
