fn main() { std::process::exit(equicube_cli::cli_main(std::env::args().collect())); }
