use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::problem::{ProblemKind, PsiMode};
use crate::error::{FracError, Result};
use crate::spatial::Grid2D;
use crate::timegrid::TimeMesh;

/// Which levels a solve keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Storage {
    #[default]
    Full,
    /// Only the newest level is retained.
    Rolling,
}

/// Counters collected while marching.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct RunStats {
    pub steps: usize,
    pub direct: bool,
    pub solver_iterations: usize,
    pub max_rel_residual: f64,
    pub seconds: f64,
}

/// Interior grid solutions at the stored time levels.
#[derive(Debug, Clone)]
pub struct SolutionHistory {
    pub kind: ProblemKind,
    pub mesh: Arc<TimeMesh>,
    pub grid: Grid2D,
    /// Index of `u_levels[0]`; zero unless storage is rolling.
    pub first_level: usize,
    pub u_levels: Vec<Vec<f64>>,
    /// Diffusion-wave only, aligned with `u_levels`.
    pub v_levels: Vec<Vec<f64>>,
    /// `ψ_h` for diffusion-wave problems.
    pub psi: Option<Vec<f64>>,
    pub psi_mode: PsiMode,
    pub stats: RunStats,
}

impl SolutionHistory {
    pub(crate) fn new(kind: ProblemKind, mesh: Arc<TimeMesh>, grid: Grid2D, psi: Option<Vec<f64>>, psi_mode: PsiMode) -> Self {
        Self {
            kind,
            mesh,
            grid,
            first_level: 0,
            u_levels: Vec::new(),
            v_levels: Vec::new(),
            psi,
            psi_mode,
            stats: RunStats::default(),
        }
    }

    pub(crate) fn record(&mut self, u: Vec<f64>, v: Option<Vec<f64>>, storage: Storage) {
        if storage == Storage::Rolling && !self.u_levels.is_empty() {
            self.first_level += 1;
            self.u_levels.clear();
            self.v_levels.clear();
        }
        self.u_levels.push(u);
        if let Some(v) = v {
            self.v_levels.push(v);
        }
    }

    /// Newest stored level.
    pub fn last_level(&self) -> usize {
        self.first_level + self.u_levels.len() - 1
    }

    pub fn u(&self, n: usize) -> Option<&[f64]> {
        n.checked_sub(self.first_level)
            .and_then(|i| self.u_levels.get(i))
            .map(Vec::as_slice)
    }

    pub fn v(&self, n: usize) -> Option<&[f64]> {
        n.checked_sub(self.first_level)
            .and_then(|i| self.v_levels.get(i))
            .map(Vec::as_slice)
    }

    /// `ũ^n = u^n - t_n ψ_h`; equals `u^n` for sub-diffusion.
    pub fn u_tilde(&self, n: usize) -> Option<Vec<f64>> {
        let u = self.u(n)?;
        let t = self.mesh.t(n);
        Some(match &self.psi {
            Some(psi) => u.iter().zip(psi).map(|(a, b)| a - t * b).collect(),
            None => u.to_vec(),
        })
    }

    /// Write level `n` of `u` as a snapshot.
    pub fn save_snapshot(&self, n: usize, path: impl AsRef<Path>, format: SnapshotFormat) -> Result<()> {
        let u = self
            .u(n)
            .ok_or_else(|| FracError::invalid(format!("level {n} is not stored")))?;
        let snap = Snapshot {
            mx: self.grid.mx,
            my: self.grid.my,
            n,
            t: self.mesh.t(n),
            values: u.to_vec(),
        };
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        snap.write(&mut f, format)?;
        f.flush()?;
        Ok(())
    }
}

/// On-disk layout of a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SnapshotFormat {
    /// Little-endian: `u64 Mx, u64 My, u64 n, f64 t_n`, then the values as `f64`.
    #[default]
    Binary,
    /// First line `Mx My n t_n`, then one line per interior row `j`.
    Text,
}

/// One interior grid function, row-major with `x` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub mx: usize,
    pub my: usize,
    pub n: usize,
    pub t: f64,
    pub values: Vec<f64>,
}

const BIN_HEADER: usize = 32;

impl Snapshot {
    pub fn write(&self, w: &mut impl Write, format: SnapshotFormat) -> Result<()> {
        match format {
            SnapshotFormat::Binary => {
                for v in [self.mx as u64, self.my as u64, self.n as u64] {
                    w.write_all(&v.to_le_bytes())?;
                }
                w.write_all(&self.t.to_le_bytes())?;
                for v in &self.values {
                    w.write_all(&v.to_le_bytes())?;
                }
            }
            SnapshotFormat::Text => {
                writeln!(w, "{} {} {} {:.17e}", self.mx, self.my, self.n, self.t)?;
                let nx = self.mx - 1;
                for row in self.values.chunks(nx.max(1)) {
                    let line: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
                    writeln!(w, "{}", line.join(" "))?;
                }
            }
        }
        Ok(())
    }

    pub fn read(r: impl Read, format: SnapshotFormat) -> Result<Self> {
        let bad = |m: &str| FracError::invalid(format!("malformed snapshot: {m}"));
        match format {
            SnapshotFormat::Binary => {
                let mut buf = Vec::new();
                BufReader::new(r).read_to_end(&mut buf)?;
                if buf.len() < BIN_HEADER || (buf.len() - BIN_HEADER) % 8 != 0 {
                    return Err(bad("truncated"));
                }
                let word = |i: usize| <[u8; 8]>::try_from(&buf[8 * i..8 * i + 8]).expect("eight bytes");
                let (mx, my, n) = (
                    u64::from_le_bytes(word(0)) as usize,
                    u64::from_le_bytes(word(1)) as usize,
                    u64::from_le_bytes(word(2)) as usize,
                );
                let t = f64::from_le_bytes(word(3));
                let values: Vec<f64> = buf[BIN_HEADER..]
                    .chunks_exact(8)
                    .map(|c| f64::from_le_bytes(c.try_into().expect("eight bytes")))
                    .collect();
                Self::checked(mx, my, n, t, values)
            }
            SnapshotFormat::Text => {
                let mut lines = BufReader::new(r).lines();
                let head = lines.next().ok_or_else(|| bad("empty"))??;
                let h: Vec<&str> = head.split_whitespace().collect();
                if h.len() != 4 {
                    return Err(bad("header needs four fields"));
                }
                let parse_u = |s: &str| s.parse::<usize>().map_err(|_| bad("header"));
                let (mx, my, n) = (parse_u(h[0])?, parse_u(h[1])?, parse_u(h[2])?);
                let t: f64 = h[3].parse().map_err(|_| bad("header"))?;
                let mut values = Vec::new();
                for line in lines {
                    for tok in line?.split_whitespace() {
                        values.push(tok.parse::<f64>().map_err(|_| bad("value"))?);
                    }
                }
                Self::checked(mx, my, n, t, values)
            }
        }
    }

    fn checked(mx: usize, my: usize, n: usize, t: f64, values: Vec<f64>) -> Result<Self> {
        let want = mx.saturating_sub(1) * my.saturating_sub(1);
        if values.len() != want {
            return Err(FracError::LengthMismatch {
                expected: want,
                got: values.len(),
            });
        }
        Ok(Self { mx, my, n, t, values })
    }
}
