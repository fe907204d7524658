#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <json.hpp>

namespace scarpst {

using ordered_json = nlohmann::ordered_json;

// full round-trip precision, locale-independent
inline std::string format_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string sha256_hex(const std::string& data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

// one result file: header row plus numeric columns at 17 significant digits
inline std::string csv_document(const std::vector<std::string>& header,
                                const std::vector<std::vector<double>>& columns)
{
    std::string out;
    for (size_t c = 0; c < header.size(); ++c) {
        if (c) out.push_back(',');
        out += header[c];
    }
    out.push_back('\n');
    const size_t rows = columns.empty() ? 0 : columns.front().size();
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < columns.size(); ++c) {
            if (c) out.push_back(',');
            out += format_number(columns[c][r]);
        }
        out.push_back('\n');
    }
    return out;
}

struct OutputRecord {
    std::string filename;
    std::string sha256;
    std::size_t bytes = 0;
};

// Write-once sink for one run directory: refuses to write the same file
// twice within a run and records an inventory entry per file.
class RunWriter {
public:
    explicit RunWriter(std::filesystem::path dir) : dir_(std::move(dir))
    {
        std::filesystem::create_directories(dir_);
    }

    const std::filesystem::path& dir() const { return dir_; }

    void write(const std::string& filename, const std::string& content)
    {
        for (const auto& rec : inventory_)
            if (rec.filename == filename)
                throw std::logic_error("RunWriter: file written twice in one run: " + filename);
        std::ofstream out(dir_ / filename, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("RunWriter: cannot open " + (dir_ / filename).string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.close();
        inventory_.push_back({filename, sha256_hex(content), content.size()});
    }

    const std::vector<OutputRecord>& inventory() const { return inventory_; }

private:
    std::filesystem::path dir_;
    std::vector<OutputRecord> inventory_;
};

} // namespace scarpst
