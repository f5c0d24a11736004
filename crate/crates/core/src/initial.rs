//! Initial data for the simulator, shared with the reconstruction export.
//!
//! The CSV layout is a parameter block followed by a profile block:
//!
//! ```text
//! t0,n,q,k
//! 1,3,3,1
//! r,u,ut
//! 0,...,...
//! ```

use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::params::{ModelParams, Sign};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialData {
    pub t0: f64,
    pub params: ModelParams,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
}

pub(crate) fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

impl InitialData {
    /// Samples `u` and `u_t` of a field at time `t0`.
    pub fn from_field<F: RadialField>(field: &F, t0: f64, r: &[f64]) -> Result<Self> {
        let mut u = Vec::with_capacity(r.len());
        let mut ut = Vec::with_capacity(r.len());
        for &ri in r {
            let s = field.sample(t0, ri)?;
            u.push(s.u);
            ut.push(s.u_t);
        }
        Ok(InitialData { t0, params: field.params(), r: r.to_vec(), u, ut })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
        w.write_record(["t0", "n", "q", "k"])?;
        w.write_record([fmt17(self.t0), self.params.n.to_string(), fmt17(self.params.q), self.params.k.value().to_string()])?;
        w.write_record(["r", "u", "ut"])?;
        for i in 0..self.len() {
            w.write_record([fmt17(self.r[i]), fmt17(self.u[i]), fmt17(self.ut[i])])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rd = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(input);
        let rows: Vec<csv::StringRecord> = rd.records().collect::<std::result::Result<_, _>>()?;
        let bad = |m: &str| Error::Parse(format!("initial data: {m}"));
        let header = |i: usize, want: &[&str]| -> Result<()> {
            let got: Vec<&str> = rows.get(i).map(|r| r.iter().map(str::trim).collect()).unwrap_or_default();
            if got == want {
                Ok(())
            } else {
                Err(bad(&format!("expected header {want:?} on line {}, got {got:?}", i + 1)))
            }
        };
        header(0, &["t0", "n", "q", "k"])?;
        header(2, &["r", "u", "ut"])?;
        let num = |s: &str| s.trim().parse::<f64>().map_err(|e| bad(&format!("{s:?}: {e}")));
        let p = &rows[1];
        if p.len() != 4 {
            return Err(bad("parameter line needs 4 fields"));
        }
        let n = p[1].trim().parse::<u32>().map_err(|e| bad(&format!("n: {e}")))?;
        let params = ModelParams::new(n, num(&p[2])?, Sign::from_f64(num(&p[3])?)?)?;
        let mut data = InitialData { t0: num(&p[0])?, params, r: vec![], u: vec![], ut: vec![] };
        for (i, row) in rows.iter().enumerate().skip(3) {
            if row.len() != 3 {
                return Err(bad(&format!("line {} needs 3 fields", i + 1)));
            }
            data.r.push(num(&row[0])?);
            data.u.push(num(&row[1])?);
            data.ut.push(num(&row[2])?);
        }
        if data.is_empty() {
            return Err(bad("no profile rows"));
        }
        Ok(data)
    }
}
