fn main() {
    std::process::exit(defectprop::cli::run(std::env::args_os()));
}
