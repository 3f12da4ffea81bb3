#pragma once

#include <string>
#include <vector>

#include "emle/table.hpp"

namespace emle {

// Built-in tables: "haberman" (2x2x2 with zeros at 000 and 111),
// "example3x3x3" (seven zero cells), and "rochdale" (8 binary factors, read
// from rochdale.csv in the data directory).
std::vector<std::string> dataset_names();
bool dataset_available(const std::string& name);
ContingencyTable load_dataset(const std::string& name);

// EMLE_DATA_DIR from the environment when set, else the source-tree data/.
std::string data_directory();

}  // namespace emle
