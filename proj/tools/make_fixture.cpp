// Writes a synthetic expression data set with the shape of the public leukemia
// training/test split: 38 training and 34 test samples over 3051 genes, with
// 11 and 14 AML cases. A handful of genes shift with the class label; the rest
// are noise. Usage: make_fixture <out_dir> [seed]

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

namespace {

constexpr int kGenes = 3051;
constexpr int kInformative = 6;

void write_split(const std::filesystem::path& dir, const std::string& stem, int n, int positives,
                 std::mt19937_64& rng)
{
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < positives; ++i) labels[static_cast<std::size_t>(i)] = 1;
    std::shuffle(labels.begin(), labels.end(), rng);

    std::normal_distribution<double> noise(0.0, 1.0);
    std::ofstream x(dir / (stem + "_x.csv"));
    std::ofstream y(dir / (stem + "_y.csv"));
    x.precision(6);
    for (int j = 0; j < kGenes; ++j) x << (j ? "," : "") << "g" << (j + 1);
    x << '\n';
    y << "aml\n";
    for (int i = 0; i < n; ++i) {
        const int label = labels[static_cast<std::size_t>(i)];
        for (int j = 0; j < kGenes; ++j) {
            // Informative genes are up-regulated in AML by a shrinking amount.
            const double shift = j < kInformative ? (3.0 - 0.25 * j) * label : 0.0;
            x << (j ? "," : "") << shift + noise(rng);
        }
        x << '\n';
        y << label << '\n';
    }
}

}  // namespace

int main(int argc, char** argv)
{
    if (argc < 2 || argc > 3) {
        std::cerr << "usage: make_fixture <out_dir> [seed]\n";
        return 1;
    }
    const std::filesystem::path dir = argv[1];
    const std::uint64_t seed = argc == 3 ? std::strtoull(argv[2], nullptr, 10) : 2002;
    std::filesystem::create_directories(dir);
    std::mt19937_64 rng(seed);
    write_split(dir, "train", 38, 11, rng);
    write_split(dir, "test", 34, 14, rng);
    return 0;
}
