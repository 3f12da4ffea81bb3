#include "emle/datasets.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "emle/error.hpp"

namespace emle {

namespace {

constexpr const char* kHaberman =
    "a,b,c,freq\n"
    "0,0,0,0\n0,0,1,1\n0,1,0,2\n0,1,1,1\n"
    "1,0,0,4\n1,0,1,1\n1,1,0,3\n1,1,1,0\n";

// Levels 1..3; the three 3x3 slices are c = 1, 2, 3 with rows a and columns b.
constexpr const char* kExample3x3x3 =
    "a,b,c,freq\n"
    "1,1,1,0\n1,1,2,1\n1,1,3,1\n1,2,1,1\n1,2,2,1\n1,2,3,1\n1,3,1,0\n1,3,2,1\n1,3,3,1\n"
    "2,1,1,0\n2,1,2,1\n2,1,3,1\n2,2,1,1\n2,2,2,1\n2,2,3,1\n2,3,1,1\n2,3,2,1\n2,3,3,1\n"
    "3,1,1,1\n3,1,2,1\n3,1,3,1\n3,2,1,1\n3,2,2,0\n3,2,3,0\n3,3,1,1\n3,3,2,0\n3,3,3,0\n";

ContingencyTable from_text(const char* text) {
    std::istringstream in(text);
    return parse_table(in, "freq");
}

std::filesystem::path rochdale_path() { return std::filesystem::path(data_directory()) / "rochdale.csv"; }

}  // namespace

std::string data_directory() {
    if (const char* env = std::getenv("EMLE_DATA_DIR"); env && *env) return env;
#ifdef EMLE_DATA_DIR
    return EMLE_DATA_DIR;
#else
    return "data";
#endif
}

std::vector<std::string> dataset_names() { return {"haberman", "example3x3x3", "rochdale"}; }

bool dataset_available(const std::string& name) {
    if (name == "haberman" || name == "example3x3x3") return true;
    if (name == "rochdale") return std::filesystem::exists(rochdale_path());
    return false;
}

ContingencyTable load_dataset(const std::string& name) {
    if (name == "haberman") return from_text(kHaberman);
    if (name == "example3x3x3") return from_text(kExample3x3x3);
    if (name == "rochdale") {
        if (!std::filesystem::exists(rochdale_path()))
            throw IoError("rochdale data file not found at " + rochdale_path().string());
        return read_table_file(rochdale_path().string(), "freq");
    }
    throw DataError("unknown dataset '" + name + "'");
}

}  // namespace emle
