//! Reader and writer for BELLHOP ASCII arrivals files (`.arr`, 2-D runs).
//!
//! Layout, whitespace separated, one item per line:
//!
//! ```text
//! '2D'
//! <frequency Hz>
//! <Nsz> <sz(1) .. sz(Nsz)>            source depths, m
//! <Nrz> <rz(1) .. rz(Nrz)>            receiver depths, m
//! <Nrr> <rr(1) .. rr(Nrr)>            receiver ranges, m
//! for each source:
//!   <Narrmx>                          max arrivals over receivers
//!   for each receiver depth, for each receiver range:
//!     <Narr>
//!     Narr records of 8 fields:
//!       amp phase_deg delay_re_s delay_im_s src_angle_deg rcv_angle_deg n_top n_bot
//! ```
//!
//! Arrays may wrap onto following lines. Angles are declinations (positive
//! downward), so a receiver angle maps directly onto [`Eigenray::aoa`].

use std::fmt::Write as _;

use thiserror::Error;

use super::{Eigenray, Scenario};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("expected a number for {field}, found `{token}`")]
    NonNumeric { field: &'static str, token: String },
    #[error("expected {expected} arrivals, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("unexpected end of input while reading {0}")]
    UnexpectedEof(&'static str),
    #[error("unexpected trailing data `{0}`")]
    TrailingData(String),
}

/// One arrival record as it appears in the file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrivalRecord {
    pub amplitude: f64,
    pub phase_deg: f64,
    pub delay_s: f64,
    pub delay_imag_s: f64,
    pub source_angle_deg: f64,
    pub receiver_angle_deg: f64,
    pub top_bounces: u32,
    pub bottom_bounces: u32,
}

impl ArrivalRecord {
    pub fn to_eigenray(&self) -> Eigenray<f64> {
        Eigenray {
            aoa: self.receiver_angle_deg.to_radians(),
            delay: self.delay_s,
            amplitude: self.amplitude,
            surface_bounces: self.top_bounces,
            bottom_bounces: self.bottom_bounces,
            launch_angle: self.source_angle_deg.to_radians(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceArrivals {
    pub max_arrivals: usize,
    /// Indexed `depth_index * n_ranges + range_index`.
    pub receivers: Vec<Vec<ArrivalRecord>>,
}

/// Location of a receiver inside an arrivals file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReceiverIndex {
    pub source: usize,
    pub depth: usize,
    pub range: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalsFile {
    pub frequency_hz: f64,
    pub source_depths: Vec<f64>,
    pub receiver_depths: Vec<f64>,
    pub receiver_ranges: Vec<f64>,
    pub sources: Vec<SourceArrivals>,
}

struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)))
            .collect::<Vec<_>>();
        let last_line = text.lines().count().max(1);
        Self {
            items,
            pos: 0,
            last_line,
        }
    }

    fn next(&mut self, what: &'static str) -> Result<(usize, &'a str), ParseError> {
        match self.items.get(self.pos) {
            Some(&t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(ParseError {
                line: self.last_line,
                kind: ParseErrorKind::UnexpectedEof(what),
            }),
        }
    }

    fn peek_line(&self) -> usize {
        self.items.get(self.pos).map_or(self.last_line, |t| t.0)
    }

    fn float(&mut self, field: &'static str) -> Result<f64, ParseError> {
        let (line, tok) = self.next(field)?;
        parse_fortran_float(tok).ok_or_else(|| ParseError {
            line,
            kind: ParseErrorKind::NonNumeric {
                field,
                token: tok.to_string(),
            },
        })
    }

    fn count(&mut self, field: &'static str) -> Result<usize, ParseError> {
        let (line, tok) = self.next(field)?;
        tok.parse::<usize>().map_err(|_| ParseError {
            line,
            kind: ParseErrorKind::NonNumeric {
                field,
                token: tok.to_string(),
            },
        })
    }

    fn floats(&mut self, field: &'static str) -> Result<Vec<f64>, ParseError> {
        let n = self.count(field)?;
        (0..n).map(|_| self.float(field)).collect()
    }
}

/// Parses Fortran list-directed reals, including `D` exponents and the
/// `1.0-100` form written for three-digit exponents.
fn parse_fortran_float(tok: &str) -> Option<f64> {
    if let Ok(v) = tok.parse::<f64>() {
        return Some(v);
    }
    let t = tok.replace(['D', 'd'], "E");
    if let Ok(v) = t.parse::<f64>() {
        return Some(v);
    }
    let bytes = t.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'-' || bytes[i] == b'+') && bytes[i - 1].is_ascii_digit())?;
    format!("{}E{}", &t[..split], &t[split..]).parse().ok()
}

impl ArrivalsFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut tok = Tokens::new(text);
        let (line, flag) = tok.next("dimension flag")?;
        let flag_clean = flag.trim_matches(|c| c == '\'' || c == '"');
        if flag_clean != "2D" {
            return Err(ParseError {
                line,
                kind: ParseErrorKind::MalformedHeader(format!(
                    "expected '2D' dimension flag, found `{flag}`"
                )),
            });
        }
        let frequency_hz = tok.float("frequency")?;
        let source_depths = tok.floats("source depths")?;
        let receiver_depths = tok.floats("receiver depths")?;
        let receiver_ranges = tok.floats("receiver ranges")?;
        if source_depths.is_empty() || receiver_depths.is_empty() || receiver_ranges.is_empty() {
            return Err(ParseError {
                line: tok.peek_line(),
                kind: ParseErrorKind::MalformedHeader(
                    "source and receiver position counts must be positive".into(),
                ),
            });
        }
        let n_receivers = receiver_depths.len() * receiver_ranges.len();
        let mut sources = Vec::with_capacity(source_depths.len());
        for _ in 0..source_depths.len() {
            let max_arrivals = tok.count("max arrivals")?;
            let mut receivers = Vec::with_capacity(n_receivers);
            for _ in 0..n_receivers {
                let count_line = tok.peek_line();
                let n = tok.count("arrival count")?;
                if n > max_arrivals {
                    return Err(ParseError {
                        line: count_line,
                        kind: ParseErrorKind::CountMismatch {
                            expected: max_arrivals,
                            found: n,
                        },
                    });
                }
                let mut records = Vec::with_capacity(n);
                for found in 0..n {
                    if tok.pos >= tok.items.len() {
                        return Err(ParseError {
                            line: tok.last_line,
                            kind: ParseErrorKind::CountMismatch { expected: n, found },
                        });
                    }
                    records.push(read_record(&mut tok)?);
                }
                receivers.push(records);
            }
            sources.push(SourceArrivals {
                max_arrivals,
                receivers,
            });
        }
        if let Some(&(line, t)) = tok.items.get(tok.pos) {
            return Err(ParseError {
                line,
                kind: ParseErrorKind::TrailingData(t.to_string()),
            });
        }
        Ok(Self {
            frequency_hz,
            source_depths,
            receiver_depths,
            receiver_ranges,
            sources,
        })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let row = |out: &mut String, xs: &[f64]| {
            write!(out, "{}", xs.len()).unwrap();
            for x in xs {
                write!(out, " {x:e}").unwrap();
            }
            out.push('\n');
        };
        out.push_str("'2D'\n");
        writeln!(out, "{:e}", self.frequency_hz).unwrap();
        row(&mut out, &self.source_depths);
        row(&mut out, &self.receiver_depths);
        row(&mut out, &self.receiver_ranges);
        for src in &self.sources {
            writeln!(out, "{}", src.max_arrivals).unwrap();
            for recs in &src.receivers {
                writeln!(out, "{}", recs.len()).unwrap();
                for r in recs {
                    writeln!(
                        out,
                        "{:e} {:e} {:e} {:e} {:e} {:e} {} {}",
                        r.amplitude,
                        r.phase_deg,
                        r.delay_s,
                        r.delay_imag_s,
                        r.source_angle_deg,
                        r.receiver_angle_deg,
                        r.top_bounces,
                        r.bottom_bounces
                    )
                    .unwrap();
                }
            }
        }
        out
    }

    /// Eigenrays for every (source, receiver) pair, in file order.
    pub fn eigenrays(&self) -> Vec<(ReceiverIndex, Vec<Eigenray<f64>>)> {
        let n_ranges = self.receiver_ranges.len();
        let mut out = Vec::new();
        for (s, src) in self.sources.iter().enumerate() {
            for (k, recs) in src.receivers.iter().enumerate() {
                out.push((
                    ReceiverIndex {
                        source: s,
                        depth: k / n_ranges,
                        range: k % n_ranges,
                    },
                    recs.iter().map(ArrivalRecord::to_eigenray).collect(),
                ));
            }
        }
        out
    }

    /// All eigenrays in the file, concatenated across receivers.
    pub fn all_eigenrays(&self) -> Vec<Eigenray<f64>> {
        self.eigenrays().into_iter().flat_map(|(_, r)| r).collect()
    }

    /// Single-source, single-receiver file holding traced rays.
    ///
    /// The surface is pressure-release, so each surface bounce contributes
    /// 180° of phase; bottom phase is not modelled and written as zero.
    pub fn from_eigenrays(scenario: &Scenario<f64>, rays: &[Eigenray<f64>]) -> Self {
        let records = rays
            .iter()
            .map(|r| ArrivalRecord {
                amplitude: r.amplitude,
                phase_deg: (180.0 * r.surface_bounces as f64) % 360.0,
                delay_s: r.delay,
                delay_imag_s: 0.0,
                source_angle_deg: r.launch_angle.to_degrees(),
                receiver_angle_deg: r.aoa.to_degrees(),
                top_bounces: r.surface_bounces,
                bottom_bounces: r.bottom_bounces,
            })
            .collect::<Vec<_>>();
        Self {
            frequency_hz: scenario.frequency_hz,
            source_depths: vec![scenario.tx_depth_m],
            receiver_depths: vec![scenario.rx_depth_m],
            receiver_ranges: vec![scenario.range_m],
            sources: vec![SourceArrivals {
                max_arrivals: records.len(),
                receivers: vec![records],
            }],
        }
    }
}

fn read_record(tok: &mut Tokens<'_>) -> Result<ArrivalRecord, ParseError> {
    let amplitude = tok.float("amplitude")?;
    let phase_deg = tok.float("phase")?;
    let delay_s = tok.float("delay")?;
    let delay_imag_s = tok.float("imaginary delay")?;
    let source_angle_deg = tok.float("source angle")?;
    let receiver_angle_deg = tok.float("receiver angle")?;
    let top = tok.float("surface bounces")?;
    let bottom = tok.float("bottom bounces")?;
    let bounce = |v: f64, field: &'static str, tok: &Tokens<'_>| {
        if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
            Ok(v as u32)
        } else {
            let (line, t) = tok.items[tok.pos - 1];
            Err(ParseError {
                line,
                kind: ParseErrorKind::NonNumeric {
                    field,
                    token: t.to_string(),
                },
            })
        }
    };
    Ok(ArrivalRecord {
        amplitude,
        phase_deg,
        delay_s,
        delay_imag_s,
        source_angle_deg,
        receiver_angle_deg,
        top_bounces: bounce(top, "surface bounces", tok)?,
        bottom_bounces: bounce(bottom, "bottom bounces", tok)?,
    })
}
