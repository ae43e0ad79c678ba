//! Report types and their CSV/JSON forms.
//!
//! CSV files carry their metadata in leading `# key=value` lines followed by
//! an ordinary header row. Rationals are always exact `n/d` strings or
//! separate numerator/denominator columns.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use vvmf::rational::{format_rational, parse_rational};
use vvmf::valuation::ValuationTable;
use vvmf::{derive_params, Component, QSeries, Rational, ReprParams, UnboundedReport};

use crate::config::Format;

/// Where the direct and `s_j` recursions first disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub component: Component,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputeReport {
    pub params: ReprParams,
    pub order: usize,
    pub modular: bool,
    /// `true` when both recursions agree on every coefficient.
    pub cross_check: bool,
    pub disagreement: Option<Disagreement>,
    pub notes: Vec<String>,
    pub comp1: QSeries,
    pub comp2: QSeries,
}

/// The `(M, N)` pairs derived from the constraints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairsReport {
    pub pairs: Vec<(u64, u64)>,
    pub matches_reference: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleRow {
    pub a: u64,
    pub b: u64,
    #[serde(rename = "N")]
    pub level: u64,
    pub c: u64,
    pub d: u64,
    #[serde(rename = "M")]
    pub proj_level: u64,
    #[serde(rename = "Q")]
    pub cofactor: u64,
    pub modular: bool,
}

impl From<&ReprParams> for TripleRow {
    fn from(p: &ReprParams) -> Self {
        TripleRow {
            a: p.a,
            b: p.b,
            level: p.level,
            c: p.c,
            d: p.d,
            proj_level: p.proj_level,
            cofactor: p.cofactor,
            modular: p.is_modular(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriplesReport {
    pub filters: Vec<String>,
    pub triples: Vec<TripleRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentGrowth {
    pub component: Component,
    pub report: UnboundedReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub params: ReprParams,
    pub components: Vec<ComponentGrowth>,
}

fn split_metadata(text: &str) -> (Vec<(String, String)>, String) {
    let mut meta = Vec::new();
    let mut body = String::new();
    for line in text.lines() {
        match line.strip_prefix("# ") {
            Some(kv) if body.is_empty() => {
                let (k, v) = kv.split_once('=').unwrap_or((kv, ""));
                meta.push((k.to_string(), v.to_string()));
            }
            _ => {
                body.push_str(line);
                body.push('\n');
            }
        }
    }
    (meta, body)
}

fn meta_value<'a>(meta: &'a [(String, String)], key: &str) -> Result<&'a str> {
    meta.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| anyhow!("missing metadata line `# {key}=...`"))
}

fn parse_triple(s: &str) -> Result<ReprParams> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|t| t.trim().parse::<u64>().with_context(|| format!("bad triple {s:?}")))
        .collect::<Result<_>>()?;
    let [a, b, n] = parts[..] else { bail!("bad triple {s:?}") };
    Ok(derive_params(a, b, n)?)
}

fn triple_string(p: &ReprParams) -> String {
    format!("{},{},{}", p.a, p.b, p.level)
}

fn parse_component(s: &str) -> Result<Component> {
    match s {
        "1" => Ok(Component::First),
        "2" => Ok(Component::Second),
        _ => bail!("bad component {s:?}"),
    }
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn csv_records(body: &str, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let found: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if found != header {
        bail!("expected CSV header {header:?}, found {found:?}");
    }
    Ok(r.records().collect::<Result<_, _>>()?)
}

const COEFF_HEADER: [&str; 5] = ["component", "offset", "n", "numerator", "denominator"];

impl ComputeReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        out.push_str(&format!("# triple={}\n", triple_string(&self.params)));
        out.push_str(&format!("# order={}\n", self.order));
        out.push_str(&format!("# modular={}\n", self.modular));
        out.push_str(&format!("# cross_check={}\n", self.cross_check));
        if let Some(d) = self.disagreement {
            out.push_str(&format!("# disagreement={},{}\n", d.component, d.index));
        }
        for note in &self.notes {
            out.push_str(&format!("# note={note}\n"));
        }
        let rows = [(1, &self.comp1), (2, &self.comp2)].into_iter().flat_map(|(i, s)| {
            let offset = format_rational(s.offset());
            s.coeffs().iter().enumerate().map(move |(n, c)| {
                vec![
                    i.to_string(),
                    offset.clone(),
                    n.to_string(),
                    c.numer().to_string(),
                    c.denom().to_string(),
                ]
            })
        });
        out.push_str(&csv_text(&COEFF_HEADER, rows)?);
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let (meta, body) = split_metadata(text);
        let params = parse_triple(meta_value(&meta, "triple")?)?;
        let order: usize = meta_value(&meta, "order")?.parse()?;
        let modular: bool = meta_value(&meta, "modular")?.parse()?;
        let cross_check: bool = meta_value(&meta, "cross_check")?.parse()?;
        let disagreement = match meta_value(&meta, "disagreement") {
            Ok(v) => {
                let (c, n) = v.split_once(',').ok_or_else(|| anyhow!("bad disagreement {v:?}"))?;
                Some(Disagreement { component: parse_component(c)?, index: n.parse()? })
            }
            Err(_) => None,
        };
        let notes = meta.iter().filter(|(k, _)| k == "note").map(|(_, v)| v.clone()).collect();
        let mut comps: [(Option<Rational>, Vec<Rational>); 2] = Default::default();
        for rec in csv_records(&body, &COEFF_HEADER)? {
            let slot = &mut comps[parse_component(&rec[0])?.index() as usize - 1];
            let offset = parse_rational(&rec[1])?;
            if slot.0.get_or_insert_with(|| offset.clone()) != &offset {
                bail!("offset changes within a component");
            }
            let n: usize = rec[2].parse()?;
            if n != slot.1.len() {
                bail!("coefficient rows out of order at n = {n}");
            }
            slot.1.push(parse_rational(&format!("{}/{}", &rec[3], &rec[4]))?);
        }
        let [(o1, c1), (o2, c2)] = comps;
        let series = |o: Option<Rational>, c: Vec<Rational>| -> Result<QSeries> {
            Ok(QSeries::new(o.ok_or_else(|| anyhow!("missing component rows"))?, c)?)
        };
        Ok(ComputeReport {
            params,
            order,
            modular,
            cross_check,
            disagreement,
            notes,
            comp1: series(o1, c1)?,
            comp2: series(o2, c2)?,
        })
    }
}

pub fn valuation_to_csv(t: &ValuationTable) -> Result<String> {
    let mut out = String::new();
    out.push_str(&format!("# triple={}\n", triple_string(&t.params)));
    out.push_str(&format!("# component={}\n", t.component));
    out.push_str(&format!("# prime={}\n", t.prime));
    out.push_str(&csv_text(&ValuationTable::CSV_HEADER, t.csv_rows().into_iter().map(Vec::from))?);
    Ok(out)
}

pub fn valuation_from_csv(text: &str) -> Result<ValuationTable> {
    let (meta, body) = split_metadata(text);
    let params = parse_triple(meta_value(&meta, "triple")?)?;
    let component = parse_component(meta_value(&meta, "component")?)?;
    let prime: u64 = meta_value(&meta, "prime")?.parse()?;
    let rows: Vec<[String; 6]> = csv_records(&body, &ValuationTable::CSV_HEADER)?
        .iter()
        .map(|r| std::array::from_fn(|i| r[i].to_string()))
        .collect();
    let table = ValuationTable::from_csv_rows(prime, component, params, &rows)?;
    // the match column is derived; reject files where it was edited
    for (row, parsed) in rows.iter().zip(table.csv_rows()) {
        if row[5] != parsed[5] {
            bail!("match column inconsistent at n = {}", row[0]);
        }
    }
    Ok(table)
}

const PAIR_HEADER: [&str; 2] = ["M", "N"];

impl PairsReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut out = format!("# matches_reference={}\n", self.matches_reference);
        let rows = self.pairs.iter().map(|(m, n)| vec![m.to_string(), n.to_string()]);
        out.push_str(&csv_text(&PAIR_HEADER, rows)?);
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let (meta, body) = split_metadata(text);
        let matches_reference = meta_value(&meta, "matches_reference")?.parse()?;
        let pairs = csv_records(&body, &PAIR_HEADER)?
            .iter()
            .map(|r| Ok((r[0].parse()?, r[1].parse()?)))
            .collect::<Result<_>>()?;
        Ok(PairsReport { pairs, matches_reference })
    }
}

const TRIPLE_HEADER: [&str; 8] = ["a", "b", "N", "c", "d", "M", "Q", "modular"];

impl TriplesReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        for f in &self.filters {
            out.push_str(&format!("# filter={f}\n"));
        }
        let rows = self.triples.iter().map(|t| {
            vec![
                t.a.to_string(),
                t.b.to_string(),
                t.level.to_string(),
                t.c.to_string(),
                t.d.to_string(),
                t.proj_level.to_string(),
                t.cofactor.to_string(),
                t.modular.to_string(),
            ]
        });
        out.push_str(&csv_text(&TRIPLE_HEADER, rows)?);
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let (meta, body) = split_metadata(text);
        let filters = meta.iter().filter(|(k, _)| k == "filter").map(|(_, v)| v.clone()).collect();
        let triples = csv_records(&body, &TRIPLE_HEADER)?
            .iter()
            .map(|r| {
                let x =
                    |i: usize| r[i].parse::<u64>().with_context(|| format!("bad {} field", TRIPLE_HEADER[i]));
                Ok(TripleRow {
                    a: x(0)?,
                    b: x(1)?,
                    level: x(2)?,
                    c: x(3)?,
                    d: x(4)?,
                    proj_level: x(5)?,
                    cofactor: x(6)?,
                    modular: r[7].parse()?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(TriplesReport { filters, triples })
    }
}

pub fn file_stem(p: &ReprParams) -> String {
    format!("{}_{}_{}", p.a, p.b, p.level)
}

pub fn to_json<T: Serialize>(x: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(x)?;
    s.push('\n');
    Ok(s)
}

/// Renders a report that has both forms.
pub fn render<T: Serialize>(x: &T, format: Format, csv: impl FnOnce(&T) -> Result<String>) -> Result<String> {
    match format {
        Format::Json => to_json(x),
        Format::Csv => csv(x),
    }
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}
