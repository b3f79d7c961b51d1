fn main() {
    std::process::exit(planecensus_cli::run(std::env::args_os()));
}
