//! Scan file format, bit-exact: `position_nm,counts,voltage_V,is_reference,seed`
//! with a header row, LF line endings and ASCII fixed-point decimals.
//! Positions carry six decimals of a nanometer (1 fm resolution, far below
//! any physical scale here) and voltages three decimals of a volt, so
//! parse → write is byte-idempotent.

use crate::beamline::{FringeScan, VelocityDistribution};
use crate::error::{Error, Result};

pub const SCAN_CSV_HEADER: &str = "position_nm,counts,voltage_V,is_reference,seed";

pub fn write_scan_csv(scan: &FringeScan) -> String {
    let mut out = String::with_capacity(64 * (scan.positions.len() + 1));
    out.push_str(SCAN_CSV_HEADER);
    out.push('\n');
    for (&pos, &counts) in scan.positions.iter().zip(scan.counts.iter()) {
        let pos_nm = pos * 1e9;
        out.push_str(&format!(
            "{:.6},{},{:.3},{},{}\n",
            pos_nm, counts, scan.voltage, scan.is_reference, scan.seed
        ));
    }
    out
}

/// Parse a scan file. Metadata not carried by the CSV (molecule name,
/// integration time) comes from the manifest; defaults are used here.
pub fn parse_scan_csv(text: &str) -> Result<FringeScan> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("scan csv is empty".into()))?;
    if header.trim() != SCAN_CSV_HEADER {
        return Err(Error::Format(format!(
            "scan csv header mismatch: expected {SCAN_CSV_HEADER:?}, got {header:?}"
        )));
    }
    let mut positions = Vec::new();
    let mut counts = Vec::new();
    let mut voltage: Option<f64> = None;
    let mut is_reference: Option<bool> = None;
    let mut seed: Option<u64> = None;
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 5 {
            return Err(Error::Format(format!(
                "scan csv line {}: expected 5 columns, got {}",
                lineno + 2,
                cols.len()
            )));
        }
        let parse_f = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::Format(format!("scan csv line {}: bad {what} {s:?}", lineno + 2)))
        };
        positions.push(parse_f(cols[0], "position")? * 1e-9);
        counts.push(cols[1].parse::<u64>().map_err(|_| {
            Error::Format(format!(
                "scan csv line {}: counts must be a non-negative integer, got {:?}",
                lineno + 2,
                cols[1]
            ))
        })?);
        let u = parse_f(cols[2], "voltage")?;
        let r = match cols[3] {
            "true" => true,
            "false" => false,
            other => {
                return Err(Error::Format(format!(
                    "scan csv line {}: is_reference must be true/false, got {other:?}",
                    lineno + 2
                )))
            }
        };
        let s = cols[4].parse::<u64>().map_err(|_| {
            Error::Format(format!("scan csv line {}: bad seed {:?}", lineno + 2, cols[4]))
        })?;
        if *voltage.get_or_insert(u) != u
            || *is_reference.get_or_insert(r) != r
            || *seed.get_or_insert(s) != s
        {
            return Err(Error::Format(format!(
                "scan csv line {}: voltage/is_reference/seed must be constant within a file",
                lineno + 2
            )));
        }
    }
    if positions.is_empty() {
        return Err(Error::Format("scan csv has no data rows".into()));
    }
    let scan = FringeScan {
        voltage: voltage.unwrap(),
        positions,
        counts,
        integration_time: 1.0,
        molecule_name: String::new(),
        seed: seed.unwrap(),
        is_reference: is_reference.unwrap(),
    };
    scan.validate()?;
    Ok(scan)
}

/// Histogram velocity file: `velocity_m_per_s,weight` rows with a header.
pub const VDIST_CSV_HEADER: &str = "velocity_m_per_s,weight";

pub fn parse_vdist_csv(text: &str) -> Result<VelocityDistribution> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("velocity csv is empty".into()))?;
    if header.trim() != VDIST_CSV_HEADER {
        return Err(Error::Format(format!(
            "velocity csv header mismatch: expected {VDIST_CSV_HEADER:?}, got {header:?}"
        )));
    }
    let mut bins = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 2 {
            return Err(Error::Format(format!(
                "velocity csv line {}: expected 2 columns",
                lineno + 2
            )));
        }
        let v = cols[0].parse::<f64>().map_err(|_| {
            Error::Format(format!("velocity csv line {}: bad velocity", lineno + 2))
        })?;
        let w = cols[1]
            .parse::<f64>()
            .map_err(|_| Error::Format(format!("velocity csv line {}: bad weight", lineno + 2)))?;
        bins.push((v, w));
    }
    VelocityDistribution::histogram(bins)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan() -> FringeScan {
        FringeScan {
            voltage: 7000.0,
            positions: (0..41).map(|i| i as f64 * 26e-9).collect(),
            counts: (0..41).map(|i| 500 + (i % 7) * 13).collect(),
            integration_time: 1.0,
            molecule_name: "compound2".into(),
            seed: 0xDEADBEEF,
            is_reference: false,
        }
    }

    #[test]
    fn roundtrip_is_lossless_and_stable() {
        let s = scan();
        let text = write_scan_csv(&s);
        assert!(text.starts_with("position_nm,counts,voltage_V,is_reference,seed\n"));
        assert!(!text.contains('\r'));
        let parsed = parse_scan_csv(&text).unwrap();
        // Positions round-trip to femtometer resolution, counts exactly.
        for (&a, &b) in parsed.positions.iter().zip(s.positions.iter()) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(parsed.counts, s.counts);
        assert_eq!(parsed.voltage, s.voltage);
        assert_eq!(parsed.seed, s.seed);
        assert_eq!(parsed.is_reference, s.is_reference);
        // Re-emission is byte-identical.
        assert_eq!(write_scan_csv(&parsed), text);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_scan_csv("").is_err());
        assert!(parse_scan_csv("wrong,header\n1,2,3,false,4\n").is_err());
        let text = write_scan_csv(&scan());
        let truncated = text.replace(",false,", ",maybe,");
        assert!(parse_scan_csv(&truncated).is_err());
        let negative = text.replace(",500,", ",-4,");
        assert!(parse_scan_csv(&negative).is_err());
    }

    #[test]
    fn vdist_csv_parses() {
        let text = "velocity_m_per_s,weight\n85,0.2\n91,0.6\n97,0.2\n";
        let v = parse_vdist_csv(text).unwrap();
        match v {
            VelocityDistribution::Histogram { bins } => {
                assert_eq!(bins.len(), 3);
                let total: f64 = bins.iter().map(|b| b.1).sum();
                assert!((total - 1.0).abs() < 1e-12);
            }
            _ => panic!("expected histogram"),
        }
        assert!(parse_vdist_csv("velocity_m_per_s,weight\n-5,1\n").is_err());
    }
}
