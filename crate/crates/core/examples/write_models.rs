//! Regenerates the bundled `models/*.rxn` files from the built-in documents.
//! Run from the workspace root: `cargo run -p rxnpack --example write_models`.

fn main() -> std::io::Result<()> {
    std::fs::create_dir_all("models")?;
    for (name, doc) in rxnpack::models::bundled_documents() {
        rxnpack::sim::io::write_atomic(
            std::path::Path::new("models").join(name).as_path(),
            &rxnpack::dsl::serialize_model(&doc),
        )?;
    }
    Ok(())
}
