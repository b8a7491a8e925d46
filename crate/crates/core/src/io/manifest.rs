//! Simulation manifest: which scan files belong together, under which
//! configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScanManifest {
    /// FNV-1a 64-bit hash of the configuration file bytes, hex.
    pub config_hash: String,
    pub molecule_name: String,
    pub master_seed: u64,
    pub ref_voltage_v: f64,
    pub integration_time_s: f64,
    pub pairs: Vec<ScanPairEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScanPairEntry {
    pub voltage_v: f64,
    pub signal_file: String,
    pub reference_file: String,
}

impl ScanManifest {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("manifest: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

/// FNV-1a 64-bit hash, hex-encoded; used to tie outputs to the exact config
/// bytes that produced them.
pub fn fnv1a64_hex(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{hash:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_known_vectors() {
        // Standard FNV-1a 64 test vectors.
        assert_eq!(fnv1a64_hex(b""), "cbf29ce484222325");
        assert_eq!(fnv1a64_hex(b"a"), "af63dc4c8601ec8c");
        assert_eq!(fnv1a64_hex(b"foobar"), "85944171f73967e8");
    }

    #[test]
    fn manifest_roundtrip() {
        let m = ScanManifest {
            config_hash: fnv1a64_hex(b"config"),
            molecule_name: "compound1".into(),
            master_seed: 42,
            ref_voltage_v: 1000.0,
            integration_time_s: 1.0,
            pairs: vec![ScanPairEntry {
                voltage_v: 5000.0,
                signal_file: "scan_005000V_signal.csv".into(),
                reference_file: "scan_005000V_reference.csv".into(),
            }],
        };
        let text = m.to_json();
        assert_eq!(ScanManifest::from_json(&text).unwrap(), m);
    }
}
