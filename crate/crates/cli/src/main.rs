fn main() {
    std::process::exit(planevec::run(std::env::args_os()));
}
