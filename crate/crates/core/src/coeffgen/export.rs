//! CSV writers for local data and coefficient tables.

use std::io::Write;

use num_complex::Complex64;

use super::{CoefficientTable, LocalData, LocalFactor};
use crate::satake::{LocalParameters, RAMANUJAN_EXPONENT, UNITARITY_TOL};
use crate::Result;

/// Writes the GL(2) classes of `local` in the ingestion schema.
///
/// Lifted data is written through its underlying classes; ramified primes
/// get one `ramified` row per supplied `a_{p^l}`, or one empty row.
pub fn write_local_csv(local: &LocalData, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["p", "kind", "param1", "param2", "omega"])?;
    for f in local.factors() {
        let p = f.prime().to_string();
        match f {
            LocalFactor::Unramified { class, .. } => {
                let mut omega = class.central_character();
                if (omega - 1.0).norm() <= UNITARITY_TOL {
                    omega = Complex64::new(1.0, 0.0);
                }
                let a1 = class.alpha1();
                if class.is_tempered() {
                    let theta = (a1 / omega.sqrt()).arg();
                    out.write_record([p, "tempered".into(), theta.to_string(), String::new(), complex(omega)])?;
                } else {
                    let mut t_prime = a1.norm().ln() / (class.prime() as f64).ln();
                    if t_prime > RAMANUJAN_EXPONENT && t_prime <= RAMANUJAN_EXPONENT * (1.0 + 1e-12) {
                        t_prime = RAMANUJAN_EXPONENT;
                    }
                    out.write_record([
                        p,
                        "nontempered".into(),
                        t_prime.to_string(),
                        a1.arg().to_string(),
                        complex(omega),
                    ])?;
                }
            }
            LocalFactor::Ramified { supplied, .. } if supplied.is_empty() => {
                out.write_record([p.as_str(), "ramified", "", "", ""])?;
            }
            LocalFactor::Ramified { supplied, .. } => {
                for a in supplied {
                    out.write_record([p.clone(), "ramified".into(), a.re.to_string(), a.im.to_string(), String::new()])?;
                }
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes `n,re,im` rows for `λ_1 … λ_X`.
pub fn write_table_csv(table: &CoefficientTable, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "re", "im"])?;
    for (n, v) in table.iter() {
        out.write_record([n.to_string(), v.re.to_string(), v.im.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

fn complex(z: Complex64) -> String {
    if z.im == 0.0 {
        z.re.to_string()
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffgen::{ingest_reader, sato_tate_source, SamplerConfig};

    #[test]
    fn local_csv_roundtrips() {
        let cfg = SamplerConfig { seed: 3, nontempered_fraction: 0.4, ..Default::default() };
        let local = sato_tate_source(&cfg, 3000).unwrap();
        let mut buf = Vec::new();
        write_local_csv(&local, &mut buf).unwrap();
        let back = ingest_reader(buf.as_slice(), "mem").unwrap();
        assert_eq!(back.factors().len(), local.factors().len());
        for (a, b) in local.factors().iter().zip(back.factors()) {
            let (a, b) = (a.class().unwrap(), b.class().unwrap());
            assert_eq!(a.is_tempered(), b.is_tempered());
            assert!((a.power_sum(1) - b.power_sum(1)).norm() < 1e-12, "p = {}", a.prime());
        }
    }

    #[test]
    fn twisted_and_ramified_rows_roundtrip() {
        let text = "p,kind,param1,param2,omega\n2,ramified,,,\n3,ramified,0.5,0.25,\n3,ramified,-1,0,\n5,tempered,0.7,,0.6+0.8i\n";
        let local = ingest_reader(text.as_bytes(), "mem").unwrap();
        let mut buf = Vec::new();
        write_local_csv(&local, &mut buf).unwrap();
        let back = ingest_reader(buf.as_slice(), "mem").unwrap();
        assert_eq!(back.factors()[1], local.factors()[1]);
        let (a, b) = (local.factor(5).unwrap(), back.factor(5).unwrap());
        assert!((a.a(1) - b.a(1)).norm() < 1e-14 && (a.a(3) - b.a(3)).norm() < 1e-14);
        assert_eq!(back.factor(2).unwrap(), &LocalFactor::Ramified { p: 2, supplied: vec![] });
    }

    #[test]
    fn table_csv_has_one_row_per_n() {
        let mut buf = Vec::new();
        write_table_csv(&CoefficientTable::trivial(5), &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().count(), 6);
        assert_eq!(s.lines().nth(2), Some("2,1,0"));
    }
}
