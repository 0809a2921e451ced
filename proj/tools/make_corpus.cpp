// Writes the bundled synthetic corpus as PGM files into the given directory.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "palqa/image.hpp"
#include "palqa/testimages.hpp"

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : ".";
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    for (const auto& [name, image] : palqa::corpus::bundled()) {
        const auto bytes = palqa::write_pgm(image);
        const std::string path = dir + "/" + name + ".pgm";
        std::ofstream out(path, std::ios::binary);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            std::cerr << "cannot write " << path << "\n";
            return 1;
        }
        std::cout << path << "\n";
    }
    return 0;
}
