use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").unwrap());
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    let config = cbindgen::Config::from_file(crate_dir.join("cbindgen.toml")).expect("cbindgen.toml");
    match cbindgen::Builder::new().with_crate(&crate_dir).with_config(config).generate() {
        Ok(bindings) => {
            std::fs::create_dir_all(crate_dir.join("include")).expect("include dir");
            bindings.write_to_file(crate_dir.join("include/trl.h"));
        }
        // a parse failure here also fails rustc with a better message
        Err(e) => println!("cargo:warning=cbindgen: {e}"),
    }
}
