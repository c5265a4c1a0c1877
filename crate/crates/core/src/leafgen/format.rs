//! Plain-text leaf files.
//!
//! ```text
//! foliation-leaf 1
//! geometry h2
//! delta 0.1
//! epsilon 0.1
//! k_width 10.0
//! n_max 2
//! samples_per_segment 4096
//! oracle tower
//! offset 0.0
//! spike 0 theta_lo theta_hi rho0 p0 q0 rho1 p1 q1 log_radius
//! ```
//!
//! H² spike jets are `(ρ, ρ_w, ρ_ww)` in `w = −ln θ`. An E² file has one
//! `bend x0 x1 y0 y0' y0'' y1 y1' y1''` line and spike lines
//! `spike n x0 x1 Y0 Y0' Y0'' Y1 Y1' Y1'' log_radius` in `Y = ln y`.
//! The oracle line is `tower`, `ackermann M`, `table v0 v1 ...` or `none`.
//! Floats are written in shortest round-trip form, so a file read back
//! yields a bit-identical leaf.

use std::fmt::Write as _;

use super::e2::{E2Leaf, E2Spike};
use super::h2::{LeafCurve, Spike};
use super::hermite::Quintic;
use super::{ConstructionParams, Geometry, Leaf};
use crate::growth::GrowthOracle;

const MAGIC: &str = "foliation-leaf 1";

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("leaf file line {line}: {message}")]
pub struct LeafFormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, LeafFormatError> {
    Err(LeafFormatError {
        line,
        message: message.into(),
    })
}

fn oracle_text(o: Option<&GrowthOracle>) -> String {
    match o {
        None => "none".into(),
        Some(GrowthOracle::Tower) => "tower".into(),
        Some(GrowthOracle::AckermannLog { m }) => format!("ackermann {m}"),
        Some(GrowthOracle::Table { values }) => {
            let mut s = String::from("table");
            for v in values {
                write!(s, " {v:?}").unwrap();
            }
            s
        }
    }
}

fn jet_text(j: &[f64; 3]) -> String {
    format!("{:?} {:?} {:?}", j[0], j[1], j[2])
}

impl Leaf {
    /// Serializes the leaf.
    pub fn to_text(&self) -> String {
        let p = self.params();
        let offset = match self {
            Leaf::H2(l) => l.offset(),
            Leaf::E2(l) => l.offset(),
        };
        let mut s = String::new();
        writeln!(s, "{MAGIC}").unwrap();
        writeln!(s, "geometry {}", self.geometry().name()).unwrap();
        writeln!(s, "delta {:?}", p.delta).unwrap();
        writeln!(s, "epsilon {:?}", p.epsilon).unwrap();
        writeln!(s, "k_width {:?}", p.k_width).unwrap();
        writeln!(s, "n_max {}", p.n_max).unwrap();
        writeln!(s, "samples_per_segment {}", p.samples_per_segment).unwrap();
        writeln!(s, "oracle {}", oracle_text(self.oracle())).unwrap();
        writeln!(s, "offset {offset:?}").unwrap();
        match self {
            Leaf::H2(l) => {
                for sp in l.spikes() {
                    writeln!(
                        s,
                        "spike {} {:?} {:?} {} {} {:?}",
                        sp.n,
                        sp.theta_lo,
                        sp.theta_hi,
                        jet_text(&sp.spline.left),
                        jet_text(&sp.spline.right),
                        sp.log_radius
                    )
                    .unwrap();
                }
            }
            Leaf::E2(l) => {
                let b = l.bend();
                writeln!(
                    s,
                    "bend {:?} {:?} {} {}",
                    b.x0,
                    b.x1,
                    jet_text(&b.left),
                    jet_text(&b.right)
                )
                .unwrap();
                for sp in l.spikes() {
                    let q = &sp.spline;
                    writeln!(
                        s,
                        "spike {} {:?} {:?} {} {} {:?}",
                        sp.n,
                        q.x0,
                        q.x1,
                        jet_text(&q.left),
                        jet_text(&q.right),
                        sp.log_radius
                    )
                    .unwrap();
                }
            }
        }
        s
    }

    /// Parses a leaf file written by [`Leaf::to_text`].
    pub fn parse(text: &str) -> Result<Leaf, LeafFormatError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, l)) if l == MAGIC => {}
            Some((i, _)) => return err(i, format!("expected '{MAGIC}'")),
            None => return err(0, "empty file"),
        }
        let mut header = Header::default();
        let mut body: Vec<(usize, Vec<&str>)> = Vec::new();
        for (i, line) in lines {
            let words: Vec<&str> = line.split_whitespace().collect();
            if matches!(words[0], "spike" | "bend") {
                body.push((i, words));
            } else if !body.is_empty() {
                return err(i, "header line after segment lines");
            } else {
                header.set(i, &words)?;
            }
        }
        let (geometry, params, oracle, offset) = header.finish()?;
        match geometry {
            Geometry::H2 => parse_h2(params, oracle, offset, &body).map(Leaf::H2),
            Geometry::E2 => parse_e2(params, oracle, offset, &body).map(Leaf::E2),
        }
    }
}

#[derive(Default)]
struct Header {
    geometry: Option<Geometry>,
    delta: Option<f64>,
    epsilon: Option<f64>,
    k_width: Option<f64>,
    n_max: Option<usize>,
    samples: Option<usize>,
    oracle: Option<Option<GrowthOracle>>,
    offset: Option<f64>,
}

fn num<T: std::str::FromStr>(line: usize, w: &str) -> Result<T, LeafFormatError> {
    w.parse()
        .or_else(|_| err(line, format!("'{w}' is not a valid number")))
}

fn one<'a>(line: usize, words: &[&'a str]) -> Result<&'a str, LeafFormatError> {
    match words {
        [_, v] => Ok(v),
        _ => err(line, format!("'{}' takes exactly one value", words[0])),
    }
}

fn put<T>(slot: &mut Option<T>, line: usize, key: &str, v: T) -> Result<(), LeafFormatError> {
    if slot.replace(v).is_some() {
        return err(line, format!("duplicate '{key}'"));
    }
    Ok(())
}

impl Header {
    fn set(&mut self, i: usize, words: &[&str]) -> Result<(), LeafFormatError> {
        let key = words[0];
        match key {
            "geometry" => {
                let g = match one(i, words)? {
                    "h2" => Geometry::H2,
                    "e2" => Geometry::E2,
                    other => return err(i, format!("unknown geometry '{other}'")),
                };
                put(&mut self.geometry, i, key, g)
            }
            "delta" => put(&mut self.delta, i, key, num(i, one(i, words)?)?),
            "epsilon" => put(&mut self.epsilon, i, key, num(i, one(i, words)?)?),
            "k_width" => put(&mut self.k_width, i, key, num(i, one(i, words)?)?),
            "n_max" => put(&mut self.n_max, i, key, num(i, one(i, words)?)?),
            "samples_per_segment" => put(&mut self.samples, i, key, num(i, one(i, words)?)?),
            "offset" => put(&mut self.offset, i, key, num(i, one(i, words)?)?),
            "oracle" => {
                let o = match words.get(1).copied() {
                    Some("none") if words.len() == 2 => None,
                    Some("tower") if words.len() == 2 => Some(GrowthOracle::Tower),
                    Some("ackermann") if words.len() == 3 => {
                        Some(GrowthOracle::AckermannLog { m: num(i, words[2])? })
                    }
                    Some("table") => {
                        let values = words[2..]
                            .iter()
                            .map(|w| num(i, w))
                            .collect::<Result<Vec<f64>, _>>()?;
                        Some(GrowthOracle::table(values).or_else(|e| err(i, e.to_string()))?)
                    }
                    _ => return err(i, "malformed oracle line"),
                };
                put(&mut self.oracle, i, key, o)
            }
            other => err(i, format!("unknown key '{other}'")),
        }
    }

    fn finish(
        self,
    ) -> Result<(Geometry, ConstructionParams, Option<GrowthOracle>, f64), LeafFormatError> {
        fn need<T>(v: Option<T>, key: &str) -> Result<T, LeafFormatError> {
            v.map_or_else(|| err(0, format!("missing '{key}'")), Ok)
        }
        let geometry = need(self.geometry, "geometry")?;
        let params = ConstructionParams {
            delta: need(self.delta, "delta")?,
            epsilon: need(self.epsilon, "epsilon")?,
            k_width: need(self.k_width, "k_width")?,
            n_max: need(self.n_max, "n_max")?,
            samples_per_segment: need(self.samples, "samples_per_segment")?,
        };
        params
            .validate(geometry)
            .or_else(|e| err(0, e.to_string()))?;
        let offset = need(self.offset, "offset")?;
        if !offset.is_finite() {
            return err(0, "offset must be finite");
        }
        Ok((geometry, params, need(self.oracle, "oracle")?, offset))
    }
}

fn floats<const N: usize>(line: usize, words: &[&str]) -> Result<[f64; N], LeafFormatError> {
    if words.len() != N {
        return err(line, format!("expected {N} numbers, found {}", words.len()));
    }
    let mut out = [0.0f64; N];
    for (o, w) in out.iter_mut().zip(words) {
        *o = num(line, w)?;
        if !o.is_finite() {
            return err(line, format!("'{w}' is not finite"));
        }
    }
    Ok(out)
}

fn spike_index(line: usize, words: &[&str], expect: usize) -> Result<(), LeafFormatError> {
    if words[0] != "spike" {
        return err(line, format!("expected a spike line, found '{}'", words[0]));
    }
    let n: usize = num(line, words.get(1).copied().unwrap_or(""))?;
    if n != expect {
        return err(line, format!("expected spike {expect}, found spike {n}"));
    }
    Ok(())
}

fn parse_h2(
    params: ConstructionParams,
    oracle: Option<GrowthOracle>,
    offset: f64,
    body: &[(usize, Vec<&str>)],
) -> Result<LeafCurve, LeafFormatError> {
    if oracle.is_none() {
        if !body.is_empty() {
            return err(body[0].0, "a leaf without an oracle has no spikes");
        }
        return Ok(LeafCurve::from_parts(params, None, Vec::new(), offset));
    }
    if body.len() != params.n_max + 1 {
        return err(0, format!("expected {} spikes, found {}", params.n_max + 1, body.len()));
    }
    let mut spikes: Vec<Spike> = Vec::with_capacity(body.len());
    for (k, (line, words)) in body.iter().enumerate() {
        spike_index(*line, words, k)?;
        let v: [f64; 9] = floats(*line, &words[2..])?;
        let (lo, hi) = (v[0], v[1]);
        if !(lo > 0.0 && lo < hi) {
            return err(*line, "spike angles must satisfy 0 < theta_lo < theta_hi");
        }
        let expected_hi = spikes.last().map_or(params.delta, |s: &Spike| s.theta_lo);
        if hi != expected_hi {
            return err(*line, format!("theta_hi {hi:?} does not continue the leaf at {expected_hi:?}"));
        }
        let left = [v[2], v[3], v[4]];
        if let Some(prev) = spikes.last() {
            if prev.spline.right != left {
                return err(*line, "spike start does not match the previous spike end");
            }
        } else {
            let core = super::h2::core_w_jet(params.delta);
            if (0..3).any(|i| (core[i] - left[i]).abs() > 1e-12 * (1.0 + core[i].abs())) {
                return err(*line, "first spike does not start on the horocycle");
            }
        }
        spikes.push(Spike::new(k, lo, hi, left, [v[5], v[6], v[7]], v[8]));
    }
    Ok(LeafCurve::from_parts(params, oracle, spikes, offset))
}

fn parse_e2(
    params: ConstructionParams,
    oracle: Option<GrowthOracle>,
    offset: f64,
    body: &[(usize, Vec<&str>)],
) -> Result<E2Leaf, LeafFormatError> {
    let Some(((bline, bwords), rest)) = body.split_first() else {
        return err(0, "missing bend line");
    };
    if bwords[0] != "bend" {
        return err(*bline, "expected the bend line first");
    }
    let b: [f64; 8] = floats(*bline, &bwords[1..])?;
    let bend = Quintic {
        x0: b[0],
        x1: b[1],
        left: [b[2], b[3], b[4]],
        right: [b[5], b[6], b[7]],
    };
    if bend.x0 != params.k_width || !(bend.x1 > bend.x0) {
        return err(*bline, "bend must start at k_width and have positive width");
    }
    if rest.len() != params.n_max + 1 {
        return err(0, format!("expected {} spikes, found {}", params.n_max + 1, rest.len()));
    }
    let mut spikes: Vec<E2Spike> = Vec::with_capacity(rest.len());
    for (k, (line, words)) in rest.iter().enumerate() {
        spike_index(*line, words, k)?;
        let v: [f64; 9] = floats(*line, &words[2..])?;
        let q = Quintic {
            x0: v[0],
            x1: v[1],
            left: [v[2], v[3], v[4]],
            right: [v[5], v[6], v[7]],
        };
        let start = spikes.last().map_or(bend.x1, |s| s.spline.x1);
        if q.x0 != start || !(q.x1 > q.x0) {
            return err(*line, "spike does not continue the leaf");
        }
        spikes.push(E2Spike {
            n: k,
            spline: q,
            log_radius: v[8],
        });
    }
    let oracle = match oracle {
        Some(o) => Some(o),
        None => return err(0, "an E2 leaf needs its oracle"),
    };
    Ok(E2Leaf::from_parts(params, oracle, bend, spikes, offset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leafgen::{build_e2_leaf, build_h2_leaf};

    fn small(mut p: ConstructionParams) -> ConstructionParams {
        p.samples_per_segment = 256;
        p
    }

    #[test]
    fn h2_roundtrip_is_exact() {
        let leaf = build_h2_leaf(&small(ConstructionParams::default_h2()), &GrowthOracle::Tower)
            .unwrap()
            .dilated(0.3);
        let leaf = Leaf::H2(leaf);
        let text = leaf.to_text();
        let back = Leaf::parse(&text).unwrap();
        assert_eq!(back, leaf);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn e2_roundtrip_is_exact() {
        let oracle = GrowthOracle::table(vec![0.5, 1.25, 3.0, 3.5]).unwrap();
        let leaf = Leaf::E2(build_e2_leaf(&small(ConstructionParams::default_e2()), &oracle).unwrap());
        let text = leaf.to_text();
        assert_eq!(Leaf::parse(&text).unwrap(), leaf);
    }

    #[test]
    fn horocycle_roundtrip() {
        let leaf = Leaf::H2(LeafCurve::horocycle(0.1));
        let text = leaf.to_text();
        assert!(text.contains("oracle none"));
        assert_eq!(Leaf::parse(&text).unwrap(), leaf);
    }

    #[test]
    fn rejects_damage() {
        let leaf = Leaf::H2(
            build_h2_leaf(&small(ConstructionParams::default_h2()), &GrowthOracle::Tower).unwrap(),
        );
        let text = leaf.to_text();
        assert!(Leaf::parse(&text.replace("geometry h2", "geometry h3")).is_err());
        assert!(Leaf::parse(&text.replace("n_max 2", "n_max 3")).is_err());
        assert!(Leaf::parse(&format!("{text}colour blue\n")).is_err());
        assert!(Leaf::parse(&text.replacen("spike 1", "spike 2", 1)).is_err());
        let e = Leaf::parse(&text.replace("foliation-leaf 1", "leaf")).unwrap_err();
        assert_eq!(e.line, 1);
    }
}
