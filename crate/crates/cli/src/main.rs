fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(flimks::driver::run_cli(&args));
}
