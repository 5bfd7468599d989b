//! Writes every corpus mesh as complex-json, and the closed surfaces also as
//! OFF, into the directory given as the first argument (default `data`).

use std::fmt::Write as _;
use std::path::PathBuf;

use curvmorse::corpus;
use curvmorse::io::ComplexDocument;

fn off(m: &corpus::Mesh) -> String {
    let ids: Vec<u32> = m.complex.vertices().collect();
    let tris = m.complex.simplices_of_dim(2);
    let mut out = format!("OFF\n{} {} {}\n", ids.len(), tris.len(), m.complex.count(1));
    for &v in &ids {
        let p = m.embedding.point(v).unwrap();
        writeln!(out, "{} {} {}", p[0], p[1], p[2]).unwrap();
    }
    for t in tris {
        let idx: Vec<String> = t
            .vertices()
            .iter()
            .map(|v| ids.binary_search(v).unwrap().to_string())
            .collect();
        writeln!(out, "3 {}", idx.join(" ")).unwrap();
    }
    out
}

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    std::fs::create_dir_all(&dir)?;
    for m in corpus::all() {
        let doc = ComplexDocument::from_complex(&m.complex, Some(&m.embedding));
        std::fs::write(dir.join(format!("{}.json", m.name)), doc.to_complex_json())?;
        if m.complex.is_closed_surface() {
            std::fs::write(dir.join(format!("{}.off", m.name)), off(&m))?;
        }
    }
    Ok(())
}
