//! Text artifacts: dataset CSVs, indicator-field CSV and plain PGM images.
//!
//! All floating-point columns use 17 significant digits in scientific
//! notation so that files are bit-stable and parse back to the same `f64`.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forward::{FarFieldRecord, PhaselessRecord};
use crate::sampling::IndicatorField;
use crate::scene::{Direction, Point2};

pub const PHASELESS_HEADER: &str = "angle_rad,k,tau_re,tau_im,z0_x,z0_y,magnitude";
pub const PHASED_HEADER: &str = "angle_rad,k,re,im";
pub const FIELD_HEADER: &str = "x,y,value";

/// 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn phaseless_csv(records: &[PhaselessRecord]) -> String {
    let mut out = String::with_capacity(records.len() * 170);
    out.push_str(PHASELESS_HEADER);
    out.push('\n');
    for r in records {
        let cols = [r.direction.angle(), r.k, r.tau.re, r.tau.im, r.z0.x, r.z0.y, r.magnitude];
        push_row(&mut out, &cols, None);
    }
    out
}

/// Phased records; `source` appends a provenance column (e.g. `retrieved`).
pub fn phased_csv(records: &[FarFieldRecord], source: Option<&str>) -> String {
    let mut out = String::with_capacity(records.len() * 100);
    out.push_str(PHASED_HEADER);
    if source.is_some() {
        out.push_str(",source");
    }
    out.push('\n');
    for r in records {
        push_row(&mut out, &[r.direction.angle(), r.k, r.value.re, r.value.im], source);
    }
    out
}

fn push_row(out: &mut String, cols: &[f64], tail: Option<&str>) {
    for (i, v) in cols.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&fmt17(*v));
    }
    if let Some(t) = tail {
        out.push(',');
        out.push_str(t);
    }
    out.push('\n');
}

fn data_rows<'a>(text: &'a str, header: &str, allow_source: bool) -> Result<impl Iterator<Item = (usize, &'a str)>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or_else(|| Error::Dataset("empty CSV".into()))?;
    let first = first.trim();
    if first != header && !(allow_source && first == format!("{header},source")) {
        return Err(Error::Dataset(format!("unexpected CSV header `{first}`, expected `{header}`")));
    }
    Ok(lines)
}

fn parse_cols(line_no: usize, line: &str, want: usize) -> Result<Vec<f64>> {
    let fields: Vec<&str> = line.trim().split(',').collect();
    if fields.len() < want {
        return Err(Error::Dataset(format!("line {}: expected {want} columns, found {}", line_no + 1, fields.len())));
    }
    fields[..want].iter().map(|f| f.trim().parse::<f64>().map_err(|_| Error::Dataset(format!("line {}: bad number `{f}`", line_no + 1)))).collect()
}

pub fn read_phaseless_csv(text: &str) -> Result<Vec<PhaselessRecord>> {
    data_rows(text, PHASELESS_HEADER, false)?
        .map(|(n, line)| {
            let c = parse_cols(n, line, 7)?;
            if line.split(',').count() != 7 {
                return Err(Error::Dataset(format!("line {}: expected 7 columns", n + 1)));
            }
            Ok(PhaselessRecord {
                direction: Direction::from_angle(c[0]),
                k: c[1],
                tau: Complex64::new(c[2], c[3]),
                z0: Point2::new(c[4], c[5]),
                magnitude: c[6],
            })
        })
        .collect()
}

pub fn read_phased_csv(text: &str) -> Result<Vec<FarFieldRecord>> {
    data_rows(text, PHASED_HEADER, true)?
        .map(|(n, line)| {
            let c = parse_cols(n, line, 4)?;
            Ok(FarFieldRecord { direction: Direction::from_angle(c[0]), k: c[1], value: Complex64::new(c[2], c[3]) })
        })
        .collect()
}

/// `x,y,value` rows in row-major order (row 0 at `y_lo`).
pub fn field_csv(field: &IndicatorField) -> String {
    let mut out = String::with_capacity(field.values.len() * 75);
    out.push_str(FIELD_HEADER);
    out.push('\n');
    for (i, v) in field.values.iter().enumerate() {
        let p = field.grid.node(i);
        push_row(&mut out, &[p.x, p.y, *v], None);
    }
    out
}

/// 8-bit plain PGM; the first image row is `y_hi`, values min-max scaled to 0..=255.
pub fn field_pgm(field: &IndicatorField) -> String {
    let (nx, ny) = (field.grid.nx, field.grid.ny);
    let scaled = field.normalized();
    let mut out = format!("P2\n{nx} {ny}\n255\n");
    for iy in (0..ny).rev() {
        let mut line_len = 0;
        for ix in 0..nx {
            let level = (255.0 * scaled[iy * nx + ix]).round().clamp(0.0, 255.0) as u8;
            let token = level.to_string();
            if line_len > 0 && line_len + 1 + token.len() > 70 {
                out.push('\n');
                line_len = 0;
            } else if line_len > 0 {
                out.push(' ');
                line_len += 1;
            }
            let _ = write!(out, "{token}");
            line_len += token.len();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{FieldInfo, SamplingGrid};

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 19.5, std::f64::consts::PI * 1e7] {
            let s = fmt17(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
            let mantissa: String = s.split('e').next().unwrap().chars().filter(|c| c.is_ascii_digit()).collect();
            assert_eq!(mantissa.len(), 17);
        }
    }

    #[test]
    fn phaseless_rows_round_trip() {
        let recs = vec![PhaselessRecord {
            direction: Direction::from_angle(-1.4137166941154069),
            k: 0.5,
            tau: Complex64::new(0.0, 1.0),
            z0: Point2::new(4.0, 4.0),
            magnitude: 1.234567890123456,
        }];
        let text = phaseless_csv(&recs);
        assert!(text.starts_with("angle_rad,k,tau_re,tau_im,z0_x,z0_y,magnitude\n"));
        assert_eq!(read_phaseless_csv(&text).unwrap(), recs);
        assert!(read_phaseless_csv("a,b\n1,2\n").is_err());
        assert!(read_phaseless_csv(&format!("{PHASELESS_HEADER}\n1,2,3\n")).is_err());
    }

    #[test]
    fn retrieved_rows_carry_provenance() {
        let recs = vec![FarFieldRecord { direction: Direction::from_angle(0.0), k: 1.5, value: Complex64::new(-0.25, 3.0) }];
        let text = phased_csv(&recs, Some("retrieved"));
        assert!(text.starts_with("angle_rad,k,re,im,source\n"));
        assert!(text.lines().nth(1).unwrap().ends_with(",retrieved"));
        assert_eq!(read_phased_csv(&text).unwrap(), recs);
    }

    #[test]
    fn pgm_layout() {
        let grid = SamplingGrid::new(0.0, 1.0, 0.0, 1.0, 3, 2).unwrap();
        let field = IndicatorField {
            grid,
            values: vec![0.0, 1.0, 2.0, 3.0, 4.0, 6.0],
            info: FieldInfo { indicator: "i2".into(), angles: vec![], z0: None, tau: None },
        };
        assert_eq!(field_pgm(&field), "P2\n3 2\n255\n128 170 255\n0 43 85\n");
        let csv = field_csv(&field);
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.lines().nth(4).unwrap().starts_with("0.0000000000000000e0,1.0000000000000000e0,"));
    }

    #[test]
    fn pgm_lines_stay_short() {
        let grid = SamplingGrid::new(0.0, 1.0, 0.0, 1.0, 200, 2).unwrap();
        let values = (0..400).map(|i| (i % 7) as f64).collect();
        let field = IndicatorField { grid, values, info: FieldInfo { indicator: "i1".into(), angles: vec![], z0: None, tau: None } };
        let pgm = field_pgm(&field);
        assert!(pgm.lines().all(|l| l.len() <= 70));
        assert_eq!(pgm.lines().skip(3).flat_map(|l| l.split_whitespace()).count(), 400);
    }
}
