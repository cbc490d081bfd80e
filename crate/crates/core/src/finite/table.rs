//! Flat mechanism table: one row per (type, score, outcome) with columns
//! `type,score,outcome,z,rho,q`. Values are `p/q` rationals; `q` is empty off
//! the support.

use crate::error::{Error, Result};
use crate::model::{FiniteMechanism, FiniteTypeSpace};
use crate::num::{self, format_rational, parse_rational};

pub const HEADER: [&str; 6] = ["type", "score", "outcome", "z", "rho", "q"];

pub fn write_mechanism_table(space: &FiniteTypeSpace, mech: &FiniteMechanism) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).map_err(csv_err)?;
    for t in 0..space.n_types() {
        for a in 0..space.n_scores() {
            let rho = &mech.recommendation[t][a];
            for x in 0..space.n_outcomes() {
                let (z, q) = match &mech.decision[t][a] {
                    Some(row) => (rho * &row[x], format_rational(&row[x])),
                    None => (num::zero(), String::new()),
                };
                w.write_record([
                    space.type_name(t),
                    space.scores[a].id.clone(),
                    space.outcomes[x].clone(),
                    format_rational(&z),
                    format_rational(rho),
                    q,
                ])
                .map_err(csv_err)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

pub fn read_mechanism_table(space: &FiniteTypeSpace, text: &str) -> Result<FiniteMechanism> {
    let (nt, na, nx) = (space.n_types(), space.n_scores(), space.n_outcomes());
    let mut rho = vec![vec![None; na]; nt];
    let mut q: Vec<Vec<Vec<Option<num::Rational>>>> = vec![vec![vec![None; nx]; na]; nt];
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_err)?;
    if header.iter().ne(HEADER) {
        return Err(Error::Config(format!("mechanism table header must be {}", HEADER.join(","))));
    }
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let t = space.type_index(&rec[0]).ok_or_else(|| Error::Config(format!("unknown type '{}'", &rec[0])))?;
        let a = space.score_index(&rec[1]).ok_or_else(|| Error::Config(format!("unknown score '{}'", &rec[1])))?;
        let x = space
            .outcomes
            .iter()
            .position(|o| o == &rec[2])
            .ok_or_else(|| Error::Config(format!("unknown outcome '{}'", &rec[2])))?;
        let p = parse_rational(&rec[4])?;
        match &rho[t][a] {
            Some(prev) if *prev != p => return Err(Error::Config(format!("inconsistent rho for ({}, {})", &rec[0], &rec[1]))),
            _ => rho[t][a] = Some(p),
        }
        if !rec[5].is_empty() {
            q[t][a][x] = Some(parse_rational(&rec[5])?);
        }
    }
    let recommendation = rho
        .into_iter()
        .map(|row| row.into_iter().map(|p| p.ok_or_else(|| Error::Config("mechanism table is missing rows".into()))).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    let decision = q
        .into_iter()
        .map(|per_t| {
            per_t
                .into_iter()
                .map(|row| if row.iter().all(Option::is_some) { Some(row.into_iter().flatten().collect()) } else { None })
                .collect()
        })
        .collect();
    Ok(FiniteMechanism { decision, recommendation })
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("mechanism table: {e}"))
}
