//! Trace CSV reading and writing.
//!
//! Header `t,fz,fy,x,y,z,rx,ry,rz`, comma separated, `.` decimal point,
//! LF line endings, one sample per line. Floats are written in their
//! shortest round-trip form so a read-back is lossless.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;
use thiserror::Error;

use crate::sim::SimResult;
use crate::types::{validate_trace, ForceSample, ForceTrace, Pose, TraceViolation};

pub const TRACE_HEADER: &str = "t,fz,fy,x,y,z,rx,ry,rz";
const FIELDS: usize = 9;

#[derive(Debug, Error)]
pub enum TraceIoError {
    #[error("trace is empty")]
    EmptyTrace,
    #[error("{path}: {cause}")]
    Io { path: String, cause: std::io::Error },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("invalid trace: {0}")]
    Invalid(#[from] TraceViolation),
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> TraceIoError + '_ {
    move |cause| TraceIoError::Io {
        path: path.display().to_string(),
        cause,
    }
}

/// Renders a trace in the CSV format.
pub fn trace_to_csv(trace: &ForceTrace) -> String {
    let mut out = String::with_capacity(64 * (trace.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for (s, p) in trace.samples.iter().zip(&trace.poses) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            s.t, s.fz, s.fy, p.x, p.y, p.z, p.rx, p.ry, p.rz
        );
    }
    out
}

pub fn write_trace(trace: &ForceTrace, path: &Path) -> Result<(), TraceIoError> {
    if trace.is_empty() {
        return Err(TraceIoError::EmptyTrace);
    }
    let mut f = std::fs::File::create(path).map_err(io_err(path))?;
    f.write_all(trace_to_csv(trace).as_bytes())
        .map_err(io_err(path))
}

pub fn export_trace(result: &SimResult, path: &Path) -> Result<(), TraceIoError> {
    write_trace(&result.trace, path)
}

/// Parses CSV text. The sample rate is recovered from the first and last
/// timestamps and the result must pass [`validate_trace`].
pub fn parse_trace<R: BufRead>(reader: R) -> Result<ForceTrace, TraceIoError> {
    let mut samples = Vec::new();
    let mut poses = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| TraceIoError::Malformed {
            line: lineno,
            msg: e.to_string(),
        })?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if lineno == 1 {
            if line != TRACE_HEADER {
                return Err(TraceIoError::Malformed {
                    line: 1,
                    msg: format!("expected header `{TRACE_HEADER}`"),
                });
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut v = [0.0f64; FIELDS];
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != FIELDS {
            return Err(TraceIoError::Malformed {
                line: lineno,
                msg: format!("expected {FIELDS} fields, found {}", parts.len()),
            });
        }
        for (slot, raw) in v.iter_mut().zip(&parts) {
            *slot = raw.trim().parse().map_err(|_| TraceIoError::Malformed {
                line: lineno,
                msg: format!("cannot parse `{raw}` as a number"),
            })?;
        }
        samples.push(ForceSample {
            t: v[0],
            fz: v[1],
            fy: v[2],
        });
        poses.push(Pose {
            x: v[3],
            y: v[4],
            z: v[5],
            rx: v[6],
            ry: v[7],
            rz: v[8],
        });
    }
    if samples.is_empty() {
        return Err(TraceIoError::EmptyTrace);
    }
    let sample_rate = match (samples.first(), samples.last()) {
        (Some(a), Some(b)) if samples.len() > 1 && b.t > a.t => {
            (samples.len() - 1) as f64 / (b.t - a.t)
        }
        _ => f64::NAN,
    };
    let trace = ForceTrace {
        sample_rate,
        samples,
        poses,
    };
    validate_trace(&trace)?;
    Ok(trace)
}

pub fn read_trace(path: &Path) -> Result<ForceTrace, TraceIoError> {
    let f = std::fs::File::open(path).map_err(io_err(path))?;
    parse_trace(std::io::BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_sample() -> ForceTrace {
        ForceTrace {
            sample_rate: 100.0,
            samples: vec![
                ForceSample {
                    t: 0.0,
                    fz: 0.0,
                    fy: 0.0,
                },
                ForceSample {
                    t: 0.01,
                    fz: 1.25,
                    fy: 0.0,
                },
            ],
            poses: vec![
                Pose::default(),
                Pose {
                    z: -0.01,
                    rx: 12.5,
                    ..Pose::default()
                },
            ],
        }
    }

    #[test]
    fn two_samples_make_three_lines() {
        let csv = trace_to_csv(&two_sample());
        assert_eq!(
            csv,
            "t,fz,fy,x,y,z,rx,ry,rz\n0,0,0,0,0,0,0,0,0\n0.01,1.25,0,0,0,-0.01,12.5,0,0\n"
        );
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn empty_trace_is_rejected() {
        let tr = ForceTrace {
            sample_rate: 100.0,
            samples: vec![],
            poses: vec![],
        };
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            write_trace(&tr, &dir.path().join("t.csv")),
            Err(TraceIoError::EmptyTrace)
        ));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        write_trace(&two_sample(), &path).unwrap();
        let back = read_trace(&path).unwrap();
        assert_eq!(back.samples, two_sample().samples);
        assert!((back.sample_rate - 100.0).abs() < 1e-9);
    }

    #[test]
    fn truncated_row_reports_line() {
        let mut text = String::from(TRACE_HEADER);
        text.push('\n');
        for i in 0..15 {
            text.push_str(&format!("{},1,0,0,0,0,0,0,0\n", i as f64 * 0.01));
        }
        text.push_str("0.15,1,0,0\n");
        let err = parse_trace(text.as_bytes()).unwrap_err();
        assert_eq!(err.to_string(), "line 17: expected 9 fields, found 4");
    }

    #[test]
    fn bad_header_and_numbers() {
        assert!(matches!(
            parse_trace("t,fz\n".as_bytes()),
            Err(TraceIoError::Malformed { line: 1, .. })
        ));
        let text = format!("{TRACE_HEADER}\n0,abc,0,0,0,0,0,0,0\n");
        assert!(matches!(
            parse_trace(text.as_bytes()),
            Err(TraceIoError::Malformed { line: 2, .. })
        ));
        let text = format!("{TRACE_HEADER}\n0,1,0,0,0,0,0,0,0\n0.01,-1,0,0,0,0,0,0,0\n");
        assert!(matches!(
            parse_trace(text.as_bytes()),
            Err(TraceIoError::Invalid(TraceViolation::NegativeFz(1)))
        ));
    }

    proptest! {
        #[test]
        fn values_round_trip(
            fz in proptest::collection::vec(0.0..500.0f64, 2..40),
            rx in -360.0..360.0f64, z in -1.0..1.0f64,
        ) {
            let n = fz.len();
            let tr = ForceTrace {
                sample_rate: 500.0,
                samples: fz.iter().enumerate().map(|(i, &f)| ForceSample { t: i as f64 * 0.002, fz: f, fy: 0.0 }).collect(),
                poses: (0..n).map(|i| Pose { z: z + i as f64 * 1e-3, rx, ry: -rx / 3.0, ..Pose::default() }).collect(),
            };
            let back = parse_trace(trace_to_csv(&tr).as_bytes()).unwrap();
            prop_assert_eq!(&back.samples, &tr.samples);
            prop_assert_eq!(&back.poses, &tr.poses);
        }
    }
}
