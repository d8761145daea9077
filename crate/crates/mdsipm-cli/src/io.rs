//! File formats: per-iteration solver logs (CSV), benchmark records
//! (CSV/JSON), and the text dump format for matrices.
//!
//! Matrix dumps are plain text: a first line `rows cols nnz`, then one
//! `i j value` line per entry with zero-based indices and 17 significant
//! digits. Dense matrices dump as a full triplet enumeration.

use std::io::{self, Write};
use std::path::Path;

use mdsipm::ipm::{CompressedKkt, IterationLog, KktSystem4};
use mdsipm::ldl::Inertia;
use mdsipm::{DenseMatrix, TripletMatrix};

use crate::bench::BenchRecord;

pub const ITERATION_LOG_HEADER: [&str; 16] = [
    "iter",
    "mu",
    "theta",
    "phi",
    "alpha_primal",
    "alpha_dual",
    "delta_w",
    "delta_c",
    "inertia_pos",
    "inertia_zero",
    "inertia_neg",
    "t_K1",
    "t_K2",
    "t_K3",
    "t_K4",
    "t_total",
];

/// Writes the per-iteration log as CSV with the canonical column set.
pub fn write_iteration_log_csv<W: Write>(w: W, log: &[IterationLog]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(ITERATION_LOG_HEADER)?;
    for l in log {
        out.write_record(&[
            l.iter.to_string(),
            l.mu.to_string(),
            l.theta.to_string(),
            l.phi.to_string(),
            l.alpha_primal.to_string(),
            l.alpha_dual.to_string(),
            l.delta_w.to_string(),
            l.delta_c.to_string(),
            l.inertia.pos.to_string(),
            l.inertia.zero.to_string(),
            l.inertia.neg.to_string(),
            l.t_k1.to_string(),
            l.t_k2.to_string(),
            l.t_k3.to_string(),
            l.t_k4.to_string(),
            l.t_total.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a per-iteration log CSV back; inverse of
/// [`write_iteration_log_csv`].
pub fn read_iteration_log_csv<R: io::Read>(r: R) -> Result<Vec<IterationLog>, csv::Error> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = |i: usize| -> &str { rec.get(i).unwrap_or_default() };
        out.push(IterationLog {
            iter: field(0).parse().unwrap_or_default(),
            mu: field(1).parse().unwrap_or_default(),
            theta: field(2).parse().unwrap_or_default(),
            phi: field(3).parse().unwrap_or_default(),
            alpha_primal: field(4).parse().unwrap_or_default(),
            alpha_dual: field(5).parse().unwrap_or_default(),
            delta_w: field(6).parse().unwrap_or_default(),
            delta_c: field(7).parse().unwrap_or_default(),
            inertia: Inertia {
                pos: field(8).parse().unwrap_or_default(),
                zero: field(9).parse().unwrap_or_default(),
                neg: field(10).parse().unwrap_or_default(),
            },
            t_k1: field(11).parse().unwrap_or_default(),
            t_k2: field(12).parse().unwrap_or_default(),
            t_k3: field(13).parse().unwrap_or_default(),
            t_k4: field(14).parse().unwrap_or_default(),
            t_total: field(15).parse().unwrap_or_default(),
        });
    }
    Ok(out)
}

pub fn write_bench_csv<W: Write>(w: W, records: &[BenchRecord]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_bench_csv<R: io::Read>(r: R) -> Result<Vec<BenchRecord>, csv::Error> {
    let mut rdr = csv::Reader::from_reader(r);
    rdr.deserialize().collect()
}

pub fn write_json<W: Write, T: serde::Serialize>(w: W, value: &T) -> serde_json::Result<()> {
    serde_json::to_writer_pretty(w, value)
}

fn dump_entries<W: Write>(
    mut w: W,
    rows: usize,
    cols: usize,
    entries: impl Iterator<Item = (usize, usize, f64)>,
    nnz: usize,
) -> io::Result<()> {
    writeln!(w, "{rows} {cols} {nnz}")?;
    for (i, j, v) in entries {
        writeln!(w, "{i} {j} {v:.16e}")?;
    }
    Ok(())
}

/// Dumps a triplet matrix in the text format, entries in storage order.
pub fn dump_triplet<W: Write>(w: W, m: &TripletMatrix) -> io::Result<()> {
    dump_entries(w, m.rows(), m.cols(), m.iter(), m.nnz())
}

/// Dumps a dense matrix as a full triplet enumeration.
pub fn dump_dense<W: Write>(w: W, m: &DenseMatrix) -> io::Result<()> {
    dump_entries(w, m.rows(), m.cols(), m.iter_entries(), m.rows() * m.cols())
}

/// Observer that writes the per-iteration KKT systems (full 4x4-block and
/// compressed) into a directory, one dump file per matrix per iteration.
pub struct KktDumper {
    dir: std::path::PathBuf,
    pub errors: Vec<String>,
}

impl KktDumper {
    pub fn new(dir: &Path) -> io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            errors: Vec::new(),
        })
    }

    fn dump(&mut self, name: String, write: impl FnOnce(std::fs::File) -> io::Result<()>) {
        let path = self.dir.join(name);
        let result = std::fs::File::create(&path).and_then(write);
        if let Err(e) = result {
            self.errors.push(format!("{}: {e}", path.display()));
        }
    }
}

impl mdsipm::ipm::IterationObserver for KktDumper {
    fn on_kkt(&mut self, iter: usize, k4: &KktSystem4<'_>, compressed: &CompressedKkt) {
        let full = k4.to_dense();
        self.dump(format!("kkt4_iter{iter:04}.txt"), |f| dump_dense(f, &full));
        let m = compressed.m.clone();
        self.dump(format!("compressed_iter{iter:04}.txt"), |f| {
            dump_dense(f, &m)
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplet_dump_format() {
        let t = TripletMatrix::from_entries(2, 3, &[(0, 1, 1.5), (1, 2, -0.25)]);
        let mut buf = Vec::new();
        dump_triplet(&mut buf, &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("2 3 2"));
        let first = lines.next().unwrap();
        assert!(first.starts_with("0 1 1.5000000000000000e0"), "{first}");
    }

    #[test]
    fn dense_dump_enumerates_all_entries() {
        let d = DenseMatrix::from_rows(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let mut buf = Vec::new();
        dump_dense(&mut buf, &d).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with("2 2 4\n"));
    }
}
