//! Legacy VTK snapshots and report files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::mesh::PolyMesh;
use crate::recovery::RecoveredField;
use crate::system::Solution;

use super::report::RunReport;

/// VTK cell type of a general polygon.
const VTK_POLYGON: u32 = 7;

/// Fields written with a mesh snapshot. Any may be absent.
#[derive(Default)]
pub struct Snapshot<'a> {
    pub solution: Option<&'a Solution>,
    pub recovered: Option<&'a RecoveredField>,
    pub indicators: Option<&'a [f64]>,
    /// Nodal J-domain weight.
    pub q: Option<&'a [f64]>,
}

fn voigt_block(s: &mut String, name: &str, rows: impl Iterator<Item = [f64; 3]>) {
    let _ = writeln!(s, "TENSORS {name} double");
    for [xx, yy, xy] in rows {
        let _ = writeln!(s, "{xx} {xy} 0\n{xy} {yy} 0\n0 0 0");
    }
}

/// Legacy ASCII VTK unstructured grid of polygons.
pub fn vtk_string(mesh: &PolyMesh, snap: &Snapshot) -> String {
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\npolyfrac\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {} double", mesh.n_vertices());
    for p in mesh.vertices() {
        let _ = writeln!(s, "{} {} 0", p.x, p.y);
    }
    let size: usize = mesh.elements().iter().map(|e| e.len() + 1).sum();
    let _ = writeln!(s, "CELLS {} {size}", mesh.n_elements());
    for el in mesh.elements() {
        let _ = write!(s, "{}", el.len());
        for v in &el.vertices {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "CELL_TYPES {}", mesh.n_elements());
    for _ in mesh.elements() {
        let _ = writeln!(s, "{VTK_POLYGON}");
    }

    let _ = writeln!(s, "CELL_DATA {}", mesh.n_elements());
    s.push_str("SCALARS level int 1\nLOOKUP_TABLE default\n");
    for el in mesh.elements() {
        let _ = writeln!(s, "{}", el.level);
    }
    if let Some(sol) = snap.solution {
        voigt_block(&mut s, "stress", sol.stresses.iter().map(|v| [v[0], v[1], v[2]]));
    }
    if let Some(rec) = snap.recovered {
        voigt_block(&mut s, "recovered_stress", rec.elements.iter().map(|l| [l.value[0], l.value[1], l.value[2]]));
    }
    if let Some(ind) = snap.indicators {
        s.push_str("SCALARS indicator double 1\nLOOKUP_TABLE default\n");
        for x in ind {
            let _ = writeln!(s, "{x}");
        }
    }

    if snap.solution.is_some() || snap.q.is_some() || snap.recovered.is_some() {
        let _ = writeln!(s, "POINT_DATA {}", mesh.n_vertices());
    }
    if let Some(sol) = snap.solution {
        s.push_str("VECTORS displacement double\n");
        for v in 0..mesh.n_vertices() {
            let u = sol.nodal(v);
            let _ = writeln!(s, "{} {} 0", u.x, u.y);
        }
    }
    if let Some(rec) = snap.recovered {
        voigt_block(&mut s, "recovered_nodal_stress", rec.nodal.iter().map(|v| [v[0], v[1], v[2]]));
    }
    if let Some(q) = snap.q {
        s.push_str("SCALARS q double 1\nLOOKUP_TABLE default\n");
        for x in q {
            let _ = writeln!(s, "{x}");
        }
    }
    s
}

/// Destination for run output; a sink without a directory discards everything.
#[derive(Clone, Debug, Default)]
pub struct OutputSink {
    pub dir: Option<PathBuf>,
    pub vtk: bool,
}

impl OutputSink {
    pub fn new(dir: Option<&Path>, vtk: bool) -> Result<OutputSink> {
        if let Some(d) = dir {
            std::fs::create_dir_all(d)?;
        }
        Ok(OutputSink { dir: dir.map(Path::to_path_buf), vtk })
    }

    pub fn snapshot(&self, name: &str, mesh: &PolyMesh, snap: &Snapshot) -> Result<()> {
        if let (Some(d), true) = (&self.dir, self.vtk) {
            std::fs::write(d.join(format!("{name}.vtk")), vtk_string(mesh, snap))?;
        }
        Ok(())
    }

    pub fn mesh(&self, name: &str, mesh: &PolyMesh) -> Result<()> {
        if let Some(d) = &self.dir {
            crate::mesh::io::write_mesh(mesh, &d.join(format!("{name}.mesh")))?;
        }
        Ok(())
    }

    /// Writes every non-empty table of the report.
    pub fn report(&self, report: &RunReport) -> Result<Vec<PathBuf>> {
        let Some(d) = &self.dir else { return Ok(vec![]) };
        let mut out = Vec::new();
        let mut put = |name: &str, body: String, nonempty: bool| -> Result<()> {
            if nonempty {
                let p = d.join(name);
                std::fs::write(&p, body)?;
                out.push(p);
            }
            Ok(())
        };
        put("refinement.csv", report.refinement_csv(), !report.refinement.is_empty())?;
        put("sif_history.csv", report.sif_history_csv(), !report.propagation.is_empty())?;
        put("convergence.csv", report.convergence_csv(), !report.convergence.is_empty())?;
        put("sif_table.csv", report.table_csv(), !report.table.is_empty())?;
        put("crack_path.csv", report.crack_path_csv(), !report.crack_path.is_empty())?;
        put("status.txt", format!("{}\n", report.status), true)?;
        Ok(out)
    }
}
