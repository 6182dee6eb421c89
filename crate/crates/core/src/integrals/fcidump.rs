//! FCIDUMP ingestion and emission.
//!
//! Text format: a header `&FCI NORB=n,NELEC=m,MS2=s,` optionally followed by
//! `ORBSYM=…`, `ISYM=…`, terminated by `&END` or `/`; then one record per
//! line, `value i j k l` with 1-based indices:
//!
//! - four nonzero indices → `(ij|kl)` in chemists' notation,
//! - `k = l = 0` → one-body `h(i,j)`,
//! - all indices zero → scalar core/nuclear energy.
//!
//! Only symmetry-unique values need to be stored; reading expands each record
//! into all 8 permutation-symmetric slots.

use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

use super::MolecularIntegrals;

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::FcidumpParse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Read integrals from an FCIDUMP file. `C` is initialized to the identity
/// (the dump's orbitals become the underlying orthonormal basis).
pub fn read_fcidump(path: impl AsRef<Path>) -> Result<MolecularIntegrals> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_fcidump(&text, path)
}

fn parse_fcidump(text: &str, path: &Path) -> Result<MolecularIntegrals> {
    let mut lines = text.lines().enumerate();

    // ---- header ----
    let mut norb: Option<usize> = None;
    let mut nelec: Option<usize> = None;
    let mut header_done = false;
    let mut records_start = 0usize;
    let mut saw_fci_tag = false;
    for (idx, raw) in lines.by_ref() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if !saw_fci_tag {
            if !line.to_ascii_uppercase().starts_with("&FCI") {
                return Err(parse_error(path, line_no, "expected header to start with &FCI"));
            }
            saw_fci_tag = true;
        }
        // Header keys may be spread over several lines; normalize separators.
        let upper = line.to_ascii_uppercase();
        let mut rest = upper.as_str();
        if let Some(stripped) = rest.strip_prefix("&FCI") {
            rest = stripped;
        }
        for token in rest.split([',', ' ']).filter(|t| !t.is_empty()) {
            if token == "&END" || token == "/" {
                header_done = true;
                break;
            }
            if let Some((key, value)) = token.split_once('=') {
                match key.trim() {
                    "NORB" => {
                        norb = Some(value.trim().parse().map_err(|_| {
                            parse_error(path, line_no, format!("bad NORB value {value:?}"))
                        })?)
                    }
                    "NELEC" => {
                        nelec = Some(value.trim().parse().map_err(|_| {
                            parse_error(path, line_no, format!("bad NELEC value {value:?}"))
                        })?)
                    }
                    // MS2, ISYM, ORBSYM and any other namelist keys are
                    // accepted and ignored; symmetry is not used here.
                    _ => {}
                }
            }
            // Bare ORBSYM continuation values ("1,1,1,") parse as tokens
            // without '='; ignore them.
        }
        if header_done {
            records_start = line_no;
            break;
        }
    }
    if !header_done {
        return Err(parse_error(path, records_start.max(1), "header never terminated with &END or /"));
    }
    let norb = norb.ok_or_else(|| parse_error(path, 1, "header missing NORB"))?;
    let nelec = nelec.ok_or_else(|| parse_error(path, 1, "header missing NELEC"))?;
    if norb == 0 {
        return Err(parse_error(path, 1, "NORB must be positive"));
    }

    let mut ints = MolecularIntegrals::zeros(norb, nelec);

    // ---- records ----
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(parse_error(
                path,
                line_no,
                format!("expected `value i j k l`, found {} fields", fields.len()),
            ));
        }
        let value: f64 = fields[0]
            .parse()
            .map_err(|_| parse_error(path, line_no, format!("non-numeric value {:?}", fields[0])))?;
        let mut ix = [0usize; 4];
        for (slot, field) in ix.iter_mut().zip(&fields[1..]) {
            *slot = field
                .parse()
                .map_err(|_| parse_error(path, line_no, format!("non-integer index {field:?}")))?;
        }
        let [i, j, k, l] = ix;
        for (name, v) in [("i", i), ("j", j), ("k", k), ("l", l)] {
            if v > norb {
                return Err(parse_error(
                    path,
                    line_no,
                    format!("index {name} = {v} out of range 1..={norb}"),
                ));
            }
        }
        match (i, j, k, l) {
            (0, 0, 0, 0) => ints.e_offset = value,
            (i, j, 0, 0) if i > 0 && j > 0 => {
                ints.h[(i - 1, j - 1)] = value;
                ints.h[(j - 1, i - 1)] = value;
            }
            (i, j, k, l) if i > 0 && j > 0 && k > 0 && l > 0 => {
                ints.set_g_symmetric(i - 1, j - 1, k - 1, l - 1, value);
            }
            _ => {
                return Err(parse_error(
                    path,
                    line_no,
                    format!("unsupported index pattern ({i} {j} {k} {l})"),
                ));
            }
        }
    }
    ints.check_finite()?;
    Ok(ints)
}

/// Write integrals as an FCIDUMP file (symmetry-unique values only,
/// full-precision floats so a read-back reproduces `h`/`g` exactly).
pub fn write_fcidump(path: impl AsRef<Path>, ints: &MolecularIntegrals, ms2: i32) -> Result<()> {
    let path = path.as_ref();
    let n = ints.n_orbitals;
    let mut out = String::new();
    let _ = writeln!(out, "&FCI NORB={},NELEC={},MS2={},", n, ints.n_electrons, ms2);
    let orbsym: Vec<&str> = std::iter::repeat("1").take(n).collect();
    let _ = writeln!(out, " ORBSYM={},", orbsym.join(","));
    let _ = writeln!(out, " ISYM=1,");
    let _ = writeln!(out, "&END");
    for k in 0..n {
        for l in 0..=k {
            for m in 0..=k {
                let n_max = if m == k { l } else { m };
                for nn in 0..=n_max {
                    let v = ints.g(k, l, m, nn);
                    if v != 0.0 {
                        let _ = writeln!(out, "{v:.17e} {} {} {} {}", k + 1, l + 1, m + 1, nn + 1);
                    }
                }
            }
        }
    }
    for k in 0..n {
        for l in 0..=k {
            let v = ints.h[(k, l)];
            if v != 0.0 {
                let _ = writeln!(out, "{v:.17e} {} {} 0 0", k + 1, l + 1);
            }
        }
    }
    let _ = writeln!(out, "{:.17e} 0 0 0 0", ints.e_offset);
    std::fs::write(path, out).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_str(text: &str) -> Result<MolecularIntegrals> {
        parse_fcidump(text, Path::new("<test>"))
    }

    #[test]
    fn one_orbital_file() {
        let ints = parse_str(
            "&FCI NORB=1,NELEC=2,MS2=0,\n ORBSYM=1,\n ISYM=1,\n&END\n\
             -1.0 1 1 0 0\n0.5 0 0 0 0\n",
        )
        .unwrap();
        assert_eq!(ints.n_orbitals, 1);
        assert_eq!(ints.n_electrons, 2);
        assert_eq!(ints.h[(0, 0)], -1.0);
        assert_eq!(ints.e_offset, 0.5);
    }

    #[test]
    fn slash_terminates_header() {
        let ints = parse_str("&FCI NORB=2,NELEC=2,MS2=0,\n /\n0.25 1 2 1 2\n").unwrap();
        assert_eq!(ints.g(0, 1, 0, 1), 0.25);
    }

    #[test]
    fn symmetry_expansion_populates_all_images() {
        let ints = parse_str("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n0.25 1 2 1 2\n").unwrap();
        // (12|12) stored once; all 8 images filled, including (21|21) and (21|12).
        assert_eq!(ints.g(0, 1, 0, 1), 0.25);
        assert_eq!(ints.g(1, 0, 1, 0), 0.25);
        assert_eq!(ints.g(1, 0, 0, 1), 0.25);
        assert_eq!(ints.g(0, 1, 1, 0), 0.25);
        assert_eq!(ints.g(0, 0, 1, 1), 0.0);
        assert!(ints.symmetry_violation() < 1e-15);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_str("&FCI NORB=1,NELEC=2,MS2=0,\n&END\nnot-a-number 1 1 0 0\n")
            .unwrap_err();
        match err {
            Error::FcidumpParse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
        let err = parse_str("&FCI NORB=1,NELEC=2,MS2=0,\n&END\n1.0 2 1 0 0\n").unwrap_err();
        match err {
            Error::FcidumpParse { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("out of range"));
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse_str("NORB=1\n").is_err());
        assert!(parse_str("&FCI NELEC=2,\n&END\n").is_err());
    }

    #[test]
    fn round_trip_preserves_integrals() {
        let mut ints = MolecularIntegrals::zeros(2, 2);
        ints.h[(0, 0)] = -1.2527;
        ints.h[(1, 1)] = -0.4759;
        ints.h[(0, 1)] = -0.0133;
        ints.h[(1, 0)] = -0.0133;
        ints.set_g_symmetric(0, 0, 0, 0, 0.6744);
        ints.set_g_symmetric(1, 1, 1, 1, 0.6973);
        ints.set_g_symmetric(0, 0, 1, 1, 0.6636);
        ints.set_g_symmetric(0, 1, 0, 1, 0.1813);
        ints.e_offset = 0.713;

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h2.fcidump");
        write_fcidump(&path, &ints, 0).unwrap();
        let back = read_fcidump(&path).unwrap();
        assert_eq!(back.n_orbitals, 2);
        assert_eq!(back.n_electrons, 2);
        assert!((&back.h - &ints.h).abs().max() < 1e-12);
        let worst = back
            .g_flat()
            .iter()
            .zip(ints.g_flat())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(worst < 1e-12);
        assert!((back.e_offset - ints.e_offset).abs() < 1e-12);
    }
}
