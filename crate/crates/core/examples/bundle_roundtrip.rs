//! Writing an equation bundle as JSON, reading it back and re-verifying it.

use galois_patch::forge::{build, default_points, verify_bundle};
use galois_patch::rootdata::RootDatum;
use galois_patch::wire::{bundle_from_file, bundle_to_file, from_json_str, to_json_string, BundleFile};

fn main() -> galois_patch::Result<()> {
    let rd = RootDatum::from_label("A1")?;
    let bundle = build(&rd, &default_points(&rd), 10)?;
    let text = to_json_string(&bundle_to_file(&bundle));
    println!("bundle JSON: {} bytes", text.len());
    let path = std::env::temp_dir().join("galois-patch-a1.json");
    std::fs::write(&path, &text).map_err(|e| galois_patch::Error::Io(e.to_string()))?;
    let read = std::fs::read_to_string(&path).map_err(|e| galois_patch::Error::Io(e.to_string()))?;
    let file: BundleFile = from_json_str(&read)?;
    let back = bundle_from_file(&file)?;
    let rep = verify_bundle(&back);
    println!("reloaded from {}: {} checks, overall {}", path.display(), rep.checks.len(), rep.overall_pass);
    println!("re-serialization identical: {}", to_json_string(&bundle_to_file(&back)) == text);
    Ok(())
}
