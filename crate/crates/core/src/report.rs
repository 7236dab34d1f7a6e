//! Serializable reports behind the command-line tool, with JSON, CSV and text renderings.
//!
//! Big integers are emitted as JSON numbers, never as strings or floats. Every
//! list is in a deterministic order so that output is byte-identical across runs
//! and thread counts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::analysis::Analysis;
use crate::arrangement::{Arrangement, Family};
use crate::charpoly::json_integer;
use crate::exactmath::{format_rational, IntegerPolynomial, Rational};
use crate::group::{young_composition, GroupType};
use crate::semiorder::{interval_index, semiorder_of_chamber, StirlingRow};
use crate::verify::Check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A report that can be written in every output format.
pub trait Render: Serialize {
    fn csv(&self) -> String;
    fn text(&self) -> String;

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }
}

fn group_name(kind: GroupType) -> &'static str {
    match kind {
        GroupType::A => "A",
        GroupType::B => "B",
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Young subgroup notation for a type A stabilizer read off an invariant point,
/// e.g. `S{1,2}` or `S{1,2}xS{3,4}`; `{1}` for the trivial group.
pub fn young_label(z: &[Rational]) -> String {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..z.len() {
        match blocks.iter_mut().find(|b| z[b[0]] == z[i]) {
            Some(b) => b.push(i),
            None => blocks.push(vec![i]),
        }
    }
    let parts: Vec<String> = blocks
        .iter()
        .filter(|b| b.len() > 1)
        .map(|b| {
            format!(
                "S{{{}}}",
                b.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
            )
        })
        .collect();
    if parts.is_empty() {
        "{1}".to_string()
    } else {
        parts.join("x")
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FiberCount {
    pub size: usize,
    pub count: usize,
}

/// `{"family","m","group","group_order","hyperplanes_a","hyperplanes_b","chambers","enumerated",
/// "zaslavsky","agree","chA","chB","orbits","fiber_a","fiber_b"}`.
#[derive(Clone, Debug, Serialize)]
pub struct ChambersReport {
    pub family: String,
    pub m: usize,
    pub group: &'static str,
    pub group_order: serde_json::Number,
    pub hyperplanes_a: usize,
    pub hyperplanes_b: usize,
    /// `|Ch(C)|`, from enumeration when it ran and from the characteristic polynomial otherwise.
    pub chambers: serde_json::Number,
    pub enumerated: Option<usize>,
    pub zaslavsky: Option<serde_json::Number>,
    /// Whether enumeration and Zaslavsky agree; absent unless both ran.
    pub agree: Option<bool>,
    #[serde(rename = "chA")]
    pub ch_a: Option<usize>,
    #[serde(rename = "chB")]
    pub ch_b: Option<usize>,
    pub orbits: serde_json::Number,
    /// `|phi_A^{-1}(a)|`, uniform over `Ch(A)`.
    pub fiber_a: Option<usize>,
    /// Histogram of `|phi_B^{-1}(b)|` over `Ch(B)`.
    pub fiber_b: Vec<FiberCount>,
}

impl ChambersReport {
    /// Builds the report from whatever was computed: an analysis, a Zaslavsky count, or both.
    pub fn new(family: Family, arr: &Arrangement, analysis: Option<&Analysis>, zaslavsky: Option<&BigInt>) -> Self {
        let order = arr.group_type().order(arr.m());
        let enumerated = analysis.map(|a| a.chambers_c.len());
        let chambers = match (enumerated, zaslavsky) {
            (Some(n), _) => BigInt::from(n),
            (None, Some(z)) => z.clone(),
            (None, None) => BigInt::from(0),
        };
        let mut fiber_b = Vec::new();
        if let Some(an) = analysis {
            let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
            for s in an.stable_fiber_sizes() {
                *hist.entry(s).or_default() += 1;
            }
            fiber_b = hist
                .into_iter()
                .map(|(size, count)| FiberCount { size, count })
                .collect();
        }
        Self {
            family: family.name().to_string(),
            m: arr.m(),
            group: group_name(arr.group_type()),
            group_order: json_integer(&order),
            hyperplanes_a: arr.coxeter_part().len(),
            hyperplanes_b: arr.stable_part().len(),
            chambers: json_integer(&chambers),
            enumerated,
            zaslavsky: zaslavsky.map(json_integer),
            agree: match (enumerated, zaslavsky) {
                (Some(n), Some(z)) => Some(&BigInt::from(n) == z),
                _ => None,
            },
            ch_a: analysis.map(|a| a.chambers_a.len()),
            ch_b: analysis.map(|a| a.chambers_b.len()),
            orbits: json_integer(&(&chambers / &order)),
            fiber_a: analysis.map(|a| a.chambers_c.len() / a.group().order()),
            fiber_b,
        }
    }

    fn fiber_b_text(&self) -> String {
        let parts: Vec<String> = self.fiber_b.iter().map(|f| format!("{}x{}", f.size, f.count)).collect();
        parts.join(" ")
    }
}

impl Render for ChambersReport {
    fn csv(&self) -> String {
        format!(
            "family,m,group,group_order,hyperplanes_a,hyperplanes_b,chambers,enumerated,zaslavsky,agree,chA,chB,orbits,fiber_a,fiber_b\n\
             {},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            self.family,
            self.m,
            self.group,
            self.group_order,
            self.hyperplanes_a,
            self.hyperplanes_b,
            self.chambers,
            opt(&self.enumerated),
            opt(&self.zaslavsky),
            opt(&self.agree),
            opt(&self.ch_a),
            opt(&self.ch_b),
            self.orbits,
            opt(&self.fiber_a),
            self.fiber_b_text(),
        )
    }

    fn text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k}={v}\n"));
        line("family", self.family.clone());
        line("m", self.m.to_string());
        line("group", format!("{} (order {})", self.group, self.group_order));
        line(
            "hyperplanes",
            format!("{} + {}", self.hyperplanes_a, self.hyperplanes_b),
        );
        line("chambers", self.chambers.to_string());
        line("enumerated", opt(&self.enumerated));
        line("zaslavsky", opt(&self.zaslavsky));
        line("agree", opt(&self.agree));
        line("chA", opt(&self.ch_a));
        line("chB", opt(&self.ch_b));
        line("orbits", self.orbits.to_string());
        line("fiber_a", opt(&self.fiber_a));
        line("fiber_b", self.fiber_b_text());
        out
    }
}

/// `{"family","m","source","chi","chi_text","chambers","orbits","ranking_patterns","threshold","primes_used"}`.
#[derive(Clone, Debug, Serialize)]
pub struct CharpolyReport {
    pub family: String,
    pub m: usize,
    /// `finite-field` when point counts ran, `reference` when the stored table was used.
    pub source: &'static str,
    /// Coefficients, constant term first.
    pub chi: Vec<serde_json::Number>,
    pub chi_text: String,
    pub chambers: serde_json::Number,
    pub orbits: serde_json::Number,
    pub ranking_patterns: Option<serde_json::Number>,
    pub threshold: Option<u64>,
    pub primes_used: Vec<u64>,
}

impl CharpolyReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        family: Family,
        m: usize,
        source: &'static str,
        chi: &IntegerPolynomial,
        chambers: &BigInt,
        orbits: &BigInt,
        threshold: Option<u64>,
        primes_used: Vec<u64>,
    ) -> Self {
        Self {
            family: family.name().to_string(),
            m,
            source,
            chi: chi.coeffs().iter().map(json_integer).collect(),
            chi_text: chi.to_string(),
            chambers: json_integer(chambers),
            orbits: json_integer(orbits),
            ranking_patterns: (family == Family::RestrictedAllSubset).then(|| json_integer(&(orbits - 1))),
            threshold,
            primes_used,
        }
    }
}

impl Render for CharpolyReport {
    fn csv(&self) -> String {
        let primes: Vec<String> = self.primes_used.iter().map(ToString::to_string).collect();
        format!(
            "family,m,source,chi,chambers,orbits,ranking_patterns,threshold,primes_used\n{},{},{},{},{},{},{},{},{}\n",
            self.family,
            self.m,
            self.source,
            csv_field(&self.chi_text),
            self.chambers,
            self.orbits,
            opt(&self.ranking_patterns),
            opt(&self.threshold),
            primes.join(" "),
        )
    }

    fn text(&self) -> String {
        let primes: Vec<String> = self.primes_used.iter().map(ToString::to_string).collect();
        let mut out = format!(
            "family={}\nm={}\nsource={}\nchi={}\nchambers={}\norbits={}\n",
            self.family, self.m, self.source, self.chi_text, self.chambers, self.orbits
        );
        if let Some(r) = &self.ranking_patterns {
            out.push_str(&format!("ranking_patterns={r}\n"));
        }
        if let Some(t) = self.threshold {
            out.push_str(&format!("threshold={t}\nprimes_used={}\n", primes.join(" ")));
        }
        out
    }
}

/// One orbit of `Ch(B)` with its representative inside the fundamental chamber.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitEntry {
    /// Sign vector of the representative `b` over the stable part.
    pub rep: String,
    /// Sign vector of the chamber of `C` over `a0` lying in `b`.
    pub chamber: String,
    pub size: usize,
    pub stabilizer_order: usize,
    pub fiber_size: usize,
}

/// Orbits sharing a stabilizer conjugacy class.
#[derive(Clone, Debug, Serialize)]
pub struct TauEntry {
    /// Elements of the stabilizer of the first orbit in the class.
    pub stabilizer: Vec<String>,
    /// Indices into `orbits`.
    pub orbits: Vec<usize>,
}

fn tau_entries(an: &Analysis) -> Vec<TauEntry> {
    an.tau_classes
        .iter()
        .map(|c| TauEntry {
            stabilizer: c.label(),
            orbits: c.orbits.clone(),
        })
        .collect()
}

/// `{"family","m","group_order","orbits":[{"rep","chamber","size","stabilizer_order","fiber_size"}],"tau_classes":[{"stabilizer","orbits"}]}`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitsReport {
    pub family: String,
    pub m: usize,
    pub group_order: usize,
    pub orbits: Vec<OrbitEntry>,
    pub tau_classes: Vec<TauEntry>,
}

impl OrbitsReport {
    pub fn new(family: Family, an: &Analysis) -> Self {
        let orbits = an
            .orbits
            .iter()
            .map(|o| OrbitEntry {
                rep: an.chambers_b[o.stable_chamber].signs.to_string(),
                chamber: an.chambers_c[o.chamber].signs.to_string(),
                size: o.size,
                stabilizer_order: o.stabilizer.order(),
                fiber_size: o.fiber_size,
            })
            .collect();
        Self {
            family: family.name().to_string(),
            m: an.arrangement().m(),
            group_order: an.group().order(),
            orbits,
            tau_classes: tau_entries(an),
        }
    }
}

fn tau_class_of(classes: &[TauEntry], orbit: usize) -> usize {
    classes
        .iter()
        .position(|c| c.orbits.contains(&orbit))
        .expect("every orbit has a class")
}

impl Render for OrbitsReport {
    fn csv(&self) -> String {
        let mut out = String::from("orbit,rep,chamber,size,stabilizer_order,fiber_size,tau_class\n");
        for (i, o) in self.orbits.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                i + 1,
                o.rep,
                o.chamber,
                o.size,
                o.stabilizer_order,
                o.fiber_size,
                tau_class_of(&self.tau_classes, i) + 1
            ));
        }
        out
    }

    fn text(&self) -> String {
        let width = self.orbits.first().map(|o| o.rep.len()).unwrap_or(0).max(3);
        let mut out = format!(
            "{} m={} |W|={} orbits={}\n",
            self.family,
            self.m,
            self.group_order,
            self.orbits.len()
        );
        out.push_str(&format!(
            "{:<6} {:<width$} {:>6} {:>6} {:>6} {:>4}\n",
            "b", "rep", "|O(b)|", "|W_b|", "fiber", "tau"
        ));
        for (i, o) in self.orbits.iter().enumerate() {
            out.push_str(&format!(
                "{:<6} {:<width$} {:>6} {:>6} {:>6} {:>4}\n",
                format!("b{}", i + 1),
                o.rep,
                o.size,
                o.stabilizer_order,
                o.fiber_size,
                tau_class_of(&self.tau_classes, i) + 1
            ));
        }
        let total: usize = self.orbits.iter().map(|o| o.size).sum();
        out.push_str(&format!("sum |O(b)| = {total}\n"));
        out
    }
}

/// Isotropy data for one orbit representative.
#[derive(Clone, Debug, Serialize)]
pub struct IsotropyEntry {
    pub rep: String,
    pub stabilizer_order: usize,
    pub stabilizer: Vec<String>,
    /// Young subgroup notation (type A only).
    pub young: Option<String>,
    /// The stabilizer-averaged witness point.
    pub invariant_point: Vec<String>,
    /// Block sizes of equal coordinates of the invariant point (type A only).
    pub composition: Option<Vec<usize>>,
    /// Semiorder of the representative (Catalan family only).
    pub semiorder: Option<String>,
    /// Maximal intervals of the chamber of `C` over `a0` (Catalan family only).
    pub intervals: Option<String>,
}

/// `{"family","m","group_order","orbits":[{"rep","stabilizer_order","stabilizer","young","invariant_point",
/// "composition","semiorder","intervals"}],"tau_classes":[{"stabilizer","orbits"}]}`.
#[derive(Clone, Debug, Serialize)]
pub struct IsotropyReport {
    pub family: String,
    pub m: usize,
    pub group_order: usize,
    pub orbits: Vec<IsotropyEntry>,
    pub tau_classes: Vec<TauEntry>,
}

impl IsotropyReport {
    pub fn new(family: Family, an: &Analysis) -> Self {
        let type_a = an.group().kind() == GroupType::A;
        let catalan = family == Family::Catalan;
        let orbits = an
            .orbits
            .iter()
            .map(|o| {
                let b = &an.chambers_b[o.stable_chamber];
                IsotropyEntry {
                    rep: b.signs.to_string(),
                    stabilizer_order: o.stabilizer.order(),
                    stabilizer: o.stabilizer.label(),
                    young: type_a.then(|| young_label(&o.invariant_point)),
                    invariant_point: o.invariant_point.iter().map(format_rational).collect(),
                    composition: type_a.then(|| young_composition(&o.invariant_point)),
                    semiorder: catalan.then(|| semiorder_of_chamber(b).to_string()),
                    intervals: if catalan {
                        interval_index(&an.chambers_c[o.chamber]).ok().map(|i| i.to_string())
                    } else {
                        None
                    },
                }
            })
            .collect();
        Self {
            family: family.name().to_string(),
            m: an.arrangement().m(),
            group_order: an.group().order(),
            orbits,
            tau_classes: tau_entries(an),
        }
    }
}

impl Render for IsotropyReport {
    fn csv(&self) -> String {
        let mut out = String::from("orbit,rep,stabilizer_order,young,invariant_point,semiorder,intervals,tau_class\n");
        for (i, o) in self.orbits.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                i + 1,
                o.rep,
                o.stabilizer_order,
                csv_field(&opt(&o.young)),
                csv_field(&format!("({})", o.invariant_point.join(", "))),
                csv_field(&opt(&o.semiorder)),
                csv_field(&opt(&o.intervals)),
                tau_class_of(&self.tau_classes, i) + 1
            ));
        }
        out
    }

    fn text(&self) -> String {
        let mut out = format!("{} m={} |W|={}\n", self.family, self.m, self.group_order);
        for (i, o) in self.orbits.iter().enumerate() {
            out.push_str(&format!("b{}  {}\n", i + 1, o.rep));
            let group = o.young.clone().unwrap_or_else(|| o.stabilizer.join(" "));
            out.push_str(&format!("    W_b = {}  (order {})\n", group, o.stabilizer_order));
            out.push_str(&format!("    z = ({})\n", o.invariant_point.join(", ")));
            if let Some(s) = &o.semiorder {
                out.push_str(&format!("    semiorder: {s}\n"));
            }
            if let Some(s) = &o.intervals {
                out.push_str(&format!("    intervals: {s}\n"));
            }
        }
        for (k, c) in self.tau_classes.iter().enumerate() {
            let members: Vec<String> = c.orbits.iter().map(|i| format!("O(b{})", i + 1)).collect();
            out.push_str(&format!("tau class {}: {}\n", k + 1, members.join(", ")));
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvolutionEntry {
    pub m: usize,
    pub chambers_c: serde_json::Number,
    pub chambers_b: serde_json::Number,
    pub convolution: serde_json::Number,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectCount {
    pub m: usize,
    pub chambers_b: usize,
    pub expected: serde_json::Number,
    pub agree: bool,
}

/// `{"m","sequence","convolution":[{"m","chambers_c","chambers_b","convolution","holds"}],
/// "direct":[{"m","chambers_b","expected","agree"}]}`.
#[derive(Clone, Debug, Serialize)]
pub struct SemiordersReport {
    pub m: usize,
    /// Semiorder counts `|Ch(B_k)|` for `k = 1..=m`.
    pub sequence: Vec<serde_json::Number>,
    pub convolution: Vec<ConvolutionEntry>,
    /// Direct enumerations of `Ch(B_k)` that fit the chamber budget.
    pub direct: Vec<DirectCount>,
}

impl SemiordersReport {
    pub fn new(m: usize, sequence: &[BigInt], rows: &[StirlingRow], direct: Vec<DirectCount>) -> Self {
        Self {
            m,
            sequence: sequence.iter().map(json_integer).collect(),
            convolution: rows
                .iter()
                .map(|r| ConvolutionEntry {
                    m: r.m,
                    chambers_c: json_integer(&r.chambers_c),
                    chambers_b: json_integer(&r.chambers_b),
                    convolution: json_integer(&r.convolution),
                    holds: r.holds(),
                })
                .collect(),
            direct,
        }
    }

    pub fn holds(&self) -> bool {
        self.convolution.iter().all(|r| r.holds) && self.direct.iter().all(|d| d.agree)
    }
}

impl Render for SemiordersReport {
    fn csv(&self) -> String {
        let mut out = String::from("m,chambers_b,chambers_c,convolution,holds,direct\n");
        for r in &self.convolution {
            let direct = self
                .direct
                .iter()
                .find(|d| d.m == r.m)
                .map(|d| d.chambers_b.to_string());
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.m,
                r.chambers_b,
                r.chambers_c,
                r.convolution,
                r.holds,
                direct.unwrap_or_default()
            ));
        }
        out
    }

    fn text(&self) -> String {
        let mut out = format!(
            "{:>3} {:>14} {:>18} {:>18} {:>6} {:>8}\n",
            "m", "|Ch(B_m)|", "|Ch(C_m)|", "convolution", "holds", "direct"
        );
        for r in &self.convolution {
            let direct = self
                .direct
                .iter()
                .find(|d| d.m == r.m)
                .map(|d| d.chambers_b.to_string());
            out.push_str(&format!(
                "{:>3} {:>14} {:>18} {:>18} {:>6} {:>8}\n",
                r.m,
                r.chambers_b.to_string(),
                r.chambers_c.to_string(),
                r.convolution.to_string(),
                r.holds,
                direct.unwrap_or_else(|| "-".to_string())
            ));
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub check: &'static str,
    pub verdict: &'static str,
    pub detail: String,
}

/// `{"family","m","passed","checks":[{"check","verdict","detail"}]}`.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub family: String,
    pub m: usize,
    pub passed: bool,
    pub checks: Vec<CheckEntry>,
}

impl VerifyReport {
    pub fn new(family: Family, m: usize, checks: &[Check]) -> Self {
        Self {
            family: family.name().to_string(),
            m,
            passed: !checks.iter().any(Check::failed),
            checks: checks
                .iter()
                .map(|c| CheckEntry {
                    check: c.name,
                    verdict: c.verdict.label(),
                    detail: c.detail.clone(),
                })
                .collect(),
        }
    }
}

impl Render for VerifyReport {
    fn csv(&self) -> String {
        let mut out = String::from("check,verdict,detail\n");
        for c in &self.checks {
            out.push_str(&format!("{},{},{}\n", c.check, c.verdict, csv_field(&c.detail)));
        }
        out
    }

    fn text(&self) -> String {
        let width = self.checks.iter().map(|c| c.check.len()).max().unwrap_or(0);
        let mut out = format!("{} m={}\n", self.family, self.m);
        for c in &self.checks {
            out.push_str(&format!("{:<width$}  {}  {}\n", c.check, c.verdict, c.detail));
        }
        out.push_str(if self.passed {
            "all checks passed\n"
        } else {
            "some checks FAILED\n"
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational_int;

    #[test]
    fn young_labels() {
        let z: Vec<Rational> = [1, 1, -2].iter().map(|&v| rational_int(v)).collect();
        assert_eq!(young_label(&z), "S{1,2}");
        let z: Vec<Rational> = [0, 0, 0].iter().map(|&v| rational_int(v)).collect();
        assert_eq!(young_label(&z), "S{1,2,3}");
        let z: Vec<Rational> = [3, 1, 2].iter().map(|&v| rational_int(v)).collect();
        assert_eq!(young_label(&z), "{1}");
    }

    #[test]
    fn catalan_three_reports() {
        let arr = Family::Catalan.build(3).unwrap();
        let an = Analysis::new(&arr).unwrap();
        let ch = ChambersReport::new(Family::Catalan, &arr, Some(&an), Some(&BigInt::from(30)));
        let json: serde_json::Value = serde_json::from_str(&ch.render(Format::Json)).unwrap();
        assert_eq!(json["chambers"], 30);
        assert_eq!(json["orbits"], 5);
        assert_eq!(json["chB"], 19);
        assert_eq!(json["agree"], true);
        let text = ch.render(Format::Text);
        assert!(text.contains("chambers=30\n"));
        let orbits = OrbitsReport::new(Family::Catalan, &an);
        let csv = orbits.render(Format::Csv);
        assert_eq!(csv.lines().count(), 6);
        let iso = IsotropyReport::new(Family::Catalan, &an).render(Format::Text);
        assert!(iso.contains("W_b = S{1,2}"));
    }

    #[test]
    fn big_integers_stay_numbers() {
        let chi = IntegerPolynomial::from_roots(&[1, 2]);
        let chambers: BigInt = "8134544088921600".parse().unwrap();
        let r = CharpolyReport::new(
            Family::MidHyperplane,
            10,
            "reference",
            &chi,
            &chambers,
            &BigInt::from(3),
            None,
            vec![],
        );
        let s = r.render(Format::Json);
        assert!(s.contains("\"chambers\": 8134544088921600"));
    }
}
