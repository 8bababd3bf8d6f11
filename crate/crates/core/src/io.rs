//! File formats: solutions as JSON, sweeps as CSV or JSON.
//!
//! Floats are written in the shortest form that parses back to the same value,
//! so a write/read/write cycle is byte-identical.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::asymptotics::{SweepRecord, CSV_COLUMNS};
use crate::diagnostics::Residuals;
use crate::error::{Error, Result};
use crate::model::Params;
use crate::ode::{Event, RadialProfile};
use crate::shooting::{NodalFeatures, SignChangingSolution};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Knot {
    pub r: f64,
    pub u: f64,
    pub du: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub params: Params,
    pub k: usize,
    pub a_star: f64,
    pub features: Option<NodalFeatures>,
    pub residuals: Residuals,
    pub events: Vec<Event>,
    pub knots: Vec<Knot>,
}

impl SolutionFile {
    pub fn from_solution(s: &SignChangingSolution) -> Self {
        let p = &s.profile;
        SolutionFile {
            params: s.params,
            k: s.k,
            a_star: s.a_star,
            features: s.features,
            residuals: s.residuals,
            events: p.events().to_vec(),
            knots: p
                .knots()
                .iter()
                .zip(p.values())
                .zip(p.derivs())
                .map(|((&r, &u), &du)| Knot { r, u, du })
                .collect(),
        }
    }

    /// The stored samples as a Hermite-interpolated profile.
    pub fn profile(&self) -> Result<RadialProfile> {
        RadialProfile::from_parts(
            self.params,
            self.a_star,
            self.knots.iter().map(|k| k.r).collect(),
            self.knots.iter().map(|k| k.u).collect(),
            self.knots.iter().map(|k| k.du).collect(),
            self.events.clone(),
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }
}

/// A sweep point: a record, or the error that prevented one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SweepRow {
    Ok(SweepRecord),
    Failed { lambda: f64, error: String },
}

impl SweepRow {
    pub fn lambda(&self) -> f64 {
        match self {
            SweepRow::Ok(r) => r.lambda,
            SweepRow::Failed { lambda, .. } => *lambda,
        }
    }

    pub fn record(&self) -> Option<&SweepRecord> {
        match self {
            SweepRow::Ok(r) => Some(r),
            SweepRow::Failed { .. } => None,
        }
    }
}

pub fn record_values(r: &SweepRecord) -> [f64; 25] {
    [
        r.lambda,
        r.r_lambda,
        r.s_lambda,
        r.m_plus,
        r.m_minus,
        r.du_node,
        r.du_boundary,
        r.sigma,
        r.rho,
        r.gamma,
        r.q1,
        r.q2,
        r.q3,
        r.p1,
        r.p2,
        r.p3,
        r.p4,
        r.bubble_dev_plus,
        r.bubble_dev_minus,
        r.green_dev,
        r.green_grad_dev,
        r.energy,
        r.nehari,
        r.pohozaev_ball,
        r.pohozaev_annulus,
    ]
}

fn record_from_values(v: &[f64; 25]) -> SweepRecord {
    SweepRecord {
        lambda: v[0],
        r_lambda: v[1],
        s_lambda: v[2],
        m_plus: v[3],
        m_minus: v[4],
        du_node: v[5],
        du_boundary: v[6],
        sigma: v[7],
        rho: v[8],
        gamma: v[9],
        q1: v[10],
        q2: v[11],
        q3: v[12],
        p1: v[13],
        p2: v[14],
        p3: v[15],
        p4: v[16],
        bubble_dev_plus: v[17],
        bubble_dev_minus: v[18],
        green_dev: v[19],
        green_grad_dev: v[20],
        energy: v[21],
        nehari: v[22],
        pohozaev_ball: v[23],
        pohozaev_annulus: v[24],
    }
}

/// Header: the record columns followed by `error`.
pub fn csv_header() -> Vec<&'static str> {
    let mut h = CSV_COLUMNS.to_vec();
    h.push("error");
    h
}

pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header())?;
    for row in rows {
        match row {
            SweepRow::Ok(r) => {
                let mut fields: Vec<String> =
                    record_values(r).iter().map(|x| format!("{x:e}")).collect();
                fields.push(String::new());
                w.write_record(&fields)?;
            }
            SweepRow::Failed { lambda, error } => {
                let mut fields = vec![format!("{lambda:e}")];
                fields.extend(std::iter::repeat_n(String::new(), CSV_COLUMNS.len() - 1));
                fields.push(error.clone());
                w.write_record(&fields)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    if header != csv_header() {
        return Err(Error::Config(format!("unexpected CSV header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let parse = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("column {}: {e}", CSV_COLUMNS[i])))
        };
        let error = &rec[CSV_COLUMNS.len()];
        if !error.is_empty() {
            rows.push(SweepRow::Failed {
                lambda: parse(0)?,
                error: error.to_string(),
            });
            continue;
        }
        let mut v = [0.0; 25];
        for (i, slot) in v.iter_mut().enumerate() {
            *slot = parse(i)?;
        }
        rows.push(SweepRow::Ok(record_from_values(&v)));
    }
    Ok(rows)
}

pub fn sweep_to_json(rows: &[SweepRow]) -> Result<String> {
    Ok(serde_json::to_string_pretty(rows)?)
}

pub fn sweep_from_json(s: &str) -> Result<Vec<SweepRow>> {
    serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))
}

/// Reads a sweep file, choosing the format from the first non-blank byte.
pub fn read_sweep(s: &str) -> Result<Vec<SweepRow>> {
    if s.trim_start().starts_with('[') {
        sweep_from_json(s)
    } else {
        read_sweep_csv(s.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(lambda: f64) -> SweepRecord {
        let mut v = [0.0; 25];
        for (i, x) in v.iter_mut().enumerate() {
            *x = (i as f64 + 1.0) / 3.0 * 10f64.powi(i as i32 - 12);
        }
        v[0] = lambda;
        record_from_values(&v)
    }

    #[test]
    fn golden_header() {
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "lambda,r_lambda,s_lambda,m_plus,m_minus,du_node,du_boundary,sigma,rho,gamma,\
             q1,q2,q3,p1,p2,p3,p4,bubble_dev_plus,bubble_dev_minus,green_dev,green_grad_dev,\
             energy,nehari,pohozaev_ball,pohozaev_annulus,error\n"
        );
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let rows = vec![
            SweepRow::Ok(record(4.0)),
            SweepRow::Failed {
                lambda: 2.0,
                error: "no-bracket-found".into(),
            },
            SweepRow::Ok(record(0.1)),
        ];
        let mut a = Vec::new();
        write_sweep_csv(&mut a, &rows).unwrap();
        let back = read_sweep_csv(a.as_slice()).unwrap();
        assert_eq!(back, rows);
        let mut b = Vec::new();
        write_sweep_csv(&mut b, &back).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_sweep_round_trip_is_exact() {
        let rows = vec![
            SweepRow::Ok(record(4.0)),
            SweepRow::Failed {
                lambda: 2.0,
                error: "invalid-lambda".into(),
            },
        ];
        let a = sweep_to_json(&rows).unwrap();
        let back = read_sweep(&a).unwrap();
        assert_eq!(back, rows);
        assert_eq!(sweep_to_json(&back).unwrap(), a);
    }

    #[test]
    fn wrong_header_rejected() {
        let err = read_sweep_csv("lambda,q1\n1,2\n".as_bytes()).unwrap_err();
        assert_eq!(err.code(), "config-parse-error");
    }
}
