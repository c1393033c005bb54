#ifndef CONTACTDYN_CSV_HPP
#define CONTACTDYN_CSV_HPP

#include <fmt/format.h>

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace contactdyn {

// Shortest decimal representation that round-trips through IEEE-754.
inline std::string format_double(double v) { return fmt::format("{}", v); }

class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) os_ << (i ? "," : "") << cols[i];
        os_ << "\n";
    }

    void row(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i)
            os_ << (i ? "," : "") << format_double(vals[i]);
        os_ << "\n";
    }

    void raw_row(const std::vector<std::string>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i) os_ << (i ? "," : "") << vals[i];
        os_ << "\n";
    }

    void comment(const std::string& line) { os_ << "#" << line << "\n"; }

  private:
    std::ostream& os_;
};

inline std::ofstream open_output(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    return os;
}

}  // namespace contactdyn

#endif
