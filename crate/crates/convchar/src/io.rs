//! On-disk JSON formats for operators and theta assignments.
//!
//! Complex numbers are written as `[re, im]` pairs; kernels are row-major
//! matrices of such pairs. Every file carries a `schema_version` and a
//! `kind` tag, and loading validates shape and finiteness through the same
//! constructors the rest of the crate uses, so a loaded operator satisfies
//! the same invariants as a built one. Parse failures are reported with
//! line and column context.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characterize::{
    LaplaceOperatorKernel, MultiplicativeOperator, OperatorError, OperatorKind, ThetaAssignment,
    TransformKind,
};
use crate::group::GroupError;
use crate::laplace::{HalfLineGrid, LaplaceError};
use crate::signal::Signal;

/// Version tag written into (and required of) every file and report.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: malformed JSON at line {line}, column {column}: {message}")]
    Malformed {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error(
        "{path}: unsupported schema version {found} (this build reads version {SCHEMA_VERSION})"
    )]
    SchemaVersion { path: String, found: u32 },
    #[error("bad group spec in {path}")]
    BadGroup { path: String, source: GroupError },
    #[error("bad grid in {path}")]
    BadGrid { path: String, source: LaplaceError },
    #[error("bad kernel shape in {path}")]
    BadShape { path: String, source: OperatorError },
}

/// Converts a complex vector to its wire form, `[re, im]` per entry.
pub fn complex_vec_to_wire(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|v| [v.re, v.im]).collect()
}

/// Converts a wire vector back to complex values.
pub fn complex_vec_from_wire(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect()
}

/// Canonical wire form of a signal: its values in element order.
pub fn signal_to_wire(signal: &Signal) -> Vec<[f64; 2]> {
    complex_vec_to_wire(signal.values())
}

type WireMatrix = Vec<Vec<[f64; 2]>>;

fn matrix_to_wire(kernel: &[Vec<Complex64>]) -> WireMatrix {
    kernel.iter().map(|row| complex_vec_to_wire(row)).collect()
}

fn matrix_from_wire(wire: &WireMatrix) -> Vec<Vec<Complex64>> {
    wire.iter().map(|row| complex_vec_from_wire(row)).collect()
}

/// Grid header of a Laplace operator file.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridSpec {
    /// Step size.
    pub h: f64,
    /// Node count (nodes are `0, h, ..., (n-1) h`).
    pub n: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct OperatorFile {
    schema_version: u32,
    #[serde(flatten)]
    body: OperatorBody,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum OperatorBody {
    Fourier {
        group: String,
        kernel: WireMatrix,
    },
    Cosine {
        group: String,
        kernel: WireMatrix,
    },
    Laplace {
        grid: GridSpec,
        y_samples: Vec<f64>,
        kernel: WireMatrix,
    },
}

/// An operator loaded from disk: either of the two finite-group kinds, or a
/// Laplace-side kernel.
#[derive(Debug, Clone)]
pub enum LoadedOperator {
    Finite(MultiplicativeOperator),
    Laplace(LaplaceOperatorKernel),
}

impl LoadedOperator {
    pub fn kind(&self) -> OperatorKind {
        match self {
            LoadedOperator::Finite(op) => op.kind().into(),
            LoadedOperator::Laplace(_) => OperatorKind::Laplace,
        }
    }
}

fn read_file(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Malformed {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn check_schema(path: &Path, found: u32) -> Result<(), IoError> {
    if found != SCHEMA_VERSION {
        return Err(IoError::SchemaVersion {
            path: path.display().to_string(),
            found,
        });
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Write {
        path: path.display().to_string(),
        source,
    })
}

/// Serializes a report (or any serializable value) as pretty JSON with a
/// trailing newline — the canonical textual form used for all outputs.
pub fn to_report_string<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize infallibly");
    text.push('\n');
    text
}

/// Writes a report to `path` in the canonical textual form.
pub fn write_report<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    write_file(path, &to_report_string(value))
}

/// Saves a finite-group operator.
pub fn save_operator(path: &Path, op: &MultiplicativeOperator) -> Result<(), IoError> {
    let group = op.group().spec_string();
    let kernel = matrix_to_wire(op.kernel());
    let body = match op.kind() {
        TransformKind::Fourier => OperatorBody::Fourier { group, kernel },
        TransformKind::Cosine => OperatorBody::Cosine { group, kernel },
    };
    let file = OperatorFile {
        schema_version: SCHEMA_VERSION,
        body,
    };
    write_file(path, &to_report_string(&file))
}

/// Saves a Laplace-side operator kernel.
pub fn save_laplace_operator(path: &Path, op: &LaplaceOperatorKernel) -> Result<(), IoError> {
    let file = OperatorFile {
        schema_version: SCHEMA_VERSION,
        body: OperatorBody::Laplace {
            grid: GridSpec {
                h: op.grid().step(),
                n: op.grid().count(),
            },
            y_samples: op.y_samples().to_vec(),
            kernel: matrix_to_wire(op.kernel()),
        },
    };
    write_file(path, &to_report_string(&file))
}

/// Loads an operator of any kind, revalidating all shape and finiteness
/// invariants.
pub fn load_operator(path: &Path) -> Result<LoadedOperator, IoError> {
    let text = read_file(path)?;
    let file: OperatorFile = parse_json(path, &text)?;
    check_schema(path, file.schema_version)?;
    let bad_shape = |source| IoError::BadShape {
        path: path.display().to_string(),
        source,
    };
    let finite = |kind, group: String, kernel: WireMatrix| {
        let group = group.parse().map_err(|source| IoError::BadGroup {
            path: path.display().to_string(),
            source,
        })?;
        let op = MultiplicativeOperator::new(group, kind, matrix_from_wire(&kernel))
            .map_err(bad_shape)?;
        Ok(LoadedOperator::Finite(op))
    };
    match file.body {
        OperatorBody::Fourier { group, kernel } => finite(TransformKind::Fourier, group, kernel),
        OperatorBody::Cosine { group, kernel } => finite(TransformKind::Cosine, group, kernel),
        OperatorBody::Laplace {
            grid,
            y_samples,
            kernel,
        } => {
            let grid = HalfLineGrid::new(grid.h, grid.n).map_err(|source| IoError::BadGrid {
                path: path.display().to_string(),
                source,
            })?;
            let op = LaplaceOperatorKernel::new(grid, y_samples, matrix_from_wire(&kernel))
                .map_err(bad_shape)?;
            Ok(LoadedOperator::Laplace(op))
        }
    }
}

/// A theta assignment on disk, tagged with the operator kind it is meant
/// for.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaFile {
    pub schema_version: u32,
    pub kind: OperatorKind,
    pub targets: ThetaAssignment,
}

/// Saves a theta assignment.
pub fn save_theta(path: &Path, kind: OperatorKind, theta: &ThetaAssignment) -> Result<(), IoError> {
    let file = ThetaFile {
        schema_version: SCHEMA_VERSION,
        kind,
        targets: theta.clone(),
    };
    write_file(path, &to_report_string(&file))
}

/// Loads a theta assignment; target/shape validation against a concrete
/// operator happens at build time.
pub fn load_theta(path: &Path) -> Result<ThetaFile, IoError> {
    let text = read_file(path)?;
    let file: ThetaFile = parse_json(path, &text)?;
    check_schema(path, file.schema_version)?;
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characterize::ThetaTarget;
    use crate::factory::{build_from_theta, build_laplace_from_exponents};

    fn tmp(name: &str) -> (tempfile::TempDir, std::path::PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(name);
        (dir, path)
    }

    fn identity_fourier(spec: &str) -> MultiplicativeOperator {
        let grp: crate::group::FiniteAbelianGroup = spec.parse().unwrap();
        let theta = ThetaAssignment::new(
            (0..grp.order())
                .map(|i| ThetaTarget::Dual { index: i })
                .collect(),
        );
        build_from_theta(&grp, TransformKind::Fourier, &theta).unwrap()
    }

    #[test]
    fn operator_roundtrips_through_disk() {
        let op = identity_fourier("4x3");
        let (_dir, path) = tmp("op.json");
        save_operator(&path, &op).unwrap();
        match load_operator(&path).unwrap() {
            LoadedOperator::Finite(loaded) => assert_eq!(loaded, op),
            other => panic!("unexpected kind {:?}", other.kind()),
        }
    }

    #[test]
    fn laplace_operator_roundtrips_through_disk() {
        let grid = HalfLineGrid::with_horizon(0.25, 2.0).unwrap();
        let theta = ThetaAssignment::new(vec![
            ThetaTarget::Exponent { z: 1.5 },
            ThetaTarget::Annihilated,
        ]);
        let op = build_laplace_from_exponents(grid, vec![0.5, 1.0], &theta).unwrap();
        let (_dir, path) = tmp("lap.json");
        save_laplace_operator(&path, &op).unwrap();
        match load_operator(&path).unwrap() {
            LoadedOperator::Laplace(loaded) => assert_eq!(loaded, op),
            other => panic!("unexpected kind {:?}", other.kind()),
        }
    }

    #[test]
    fn theta_roundtrips_through_disk() {
        let theta = ThetaAssignment::new(vec![
            ThetaTarget::Dual { index: 2 },
            ThetaTarget::Annihilated,
            ThetaTarget::Dual { index: 0 },
        ]);
        let (_dir, path) = tmp("theta.json");
        save_theta(&path, OperatorKind::Fourier, &theta).unwrap();
        let loaded = load_theta(&path).unwrap();
        assert_eq!(loaded.kind, OperatorKind::Fourier);
        assert_eq!(loaded.targets, theta);
    }

    #[test]
    fn malformed_json_reports_position() {
        let (_dir, path) = tmp("bad.json");
        fs::write(&path, "{\n  \"schema_version\": 1,\n  \"kind\": ???\n}\n").unwrap();
        match load_operator(&path) {
            Err(IoError::Malformed { line, column, .. }) => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected result {other:?}"),
        }
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let op = identity_fourier("3");
        let (_dir, path) = tmp("op.json");
        save_operator(&path, &op).unwrap();
        let bumped = fs::read_to_string(&path)
            .unwrap()
            .replace("\"schema_version\": 1", "\"schema_version\": 99");
        fs::write(&path, bumped).unwrap();
        assert!(matches!(
            load_operator(&path),
            Err(IoError::SchemaVersion { found: 99, .. })
        ));
    }

    #[test]
    fn bad_group_spec_is_rejected() {
        let op = identity_fourier("3");
        let (_dir, path) = tmp("op.json");
        save_operator(&path, &op).unwrap();
        let mangled = fs::read_to_string(&path)
            .unwrap()
            .replace("\"group\": \"3\"", "\"group\": \"3x\"");
        fs::write(&path, mangled).unwrap();
        assert!(matches!(
            load_operator(&path),
            Err(IoError::BadGroup { .. })
        ));
    }

    #[test]
    fn ragged_kernel_is_rejected() {
        let (_dir, path) = tmp("ragged.json");
        fs::write(
            &path,
            r#"{"schema_version":1,"kind":"fourier","group":"2","kernel":[[[1,0],[0,0]],[[1,0]]]}"#,
        )
        .unwrap();
        assert!(matches!(
            load_operator(&path),
            Err(IoError::BadShape {
                source: OperatorError::ColumnCountMismatch { row: 1, .. },
                ..
            })
        ));
    }

    #[test]
    fn nonfinite_entry_is_rejected_by_parser() {
        // JSON has no literal for NaN/inf, so a hand-written file cannot
        // even express one; this pins that the parse fails rather than
        // silently mapping to null.
        let (_dir, path) = tmp("nan.json");
        fs::write(
            &path,
            r#"{"schema_version":1,"kind":"fourier","group":"1","kernel":[[[NaN,0]]]}"#,
        )
        .unwrap();
        assert!(matches!(
            load_operator(&path),
            Err(IoError::Malformed { .. })
        ));
    }

    #[test]
    fn missing_file_is_a_read_error() {
        let (_dir, path) = tmp("absent.json");
        assert!(matches!(load_operator(&path), Err(IoError::Read { .. })));
    }
}
