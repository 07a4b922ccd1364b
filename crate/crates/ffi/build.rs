use cbindgen::{Config, EnumConfig, Language, RenameRule};
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").expect("cargo sets CARGO_MANIFEST_DIR"));
    println!("cargo:rerun-if-changed=src/lib.rs");
    let config = Config {
        language: Language::C,
        include_guard: Some("ECDENSITY_H".into()),
        cpp_compat: true,
        documentation: true,
        header: Some("/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */".into()),
        // EcStatus::Ok becomes EC_STATUS_OK so variants do not collide in C.
        enumeration: EnumConfig { prefix_with_name: true, rename_variants: RenameRule::ScreamingSnakeCase, ..EnumConfig::default() },
        ..Config::default()
    };
    match cbindgen::Builder::new().with_crate(&crate_dir).with_config(config).generate() {
        Ok(b) => {
            b.write_to_file(crate_dir.join("include").join("ecdensity.h"));
        }
        Err(e) => println!("cargo:warning=header not regenerated: {e}"),
    }
}
