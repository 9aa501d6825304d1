//! Read a mesh, validate it, report quality, write it back.

use std::path::Path;

use meshplace::criteria::Criterion;
use meshplace::io::{read_mesh, write_mesh};
use meshplace::mesh::{quality_report, validate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mesh = read_mesh(&dir.join("grid_perturbed.node"), &dir.join("grid_perturbed.ele"))?;
    println!("{} vertices, {} elements, {} movable", mesh.len(), mesh.elements.len(), mesh.movable().count());
    println!("validation: {}", validate(&mesh));
    let report = quality_report(&mesh, &Criterion::parse_list("min-angle,aspect-ratio,inradius")?);
    print!("{}", report.to_csv());

    let out = std::env::temp_dir().join("meshplace_example");
    write_mesh(&mesh, &out.with_extension("node"), &out.with_extension("ele"))?;
    let back = read_mesh(&out.with_extension("node"), &out.with_extension("ele"))?;
    println!("roundtrip identical: {}", back == mesh);
    Ok(())
}
