// hmdchan - channel simulation and performance metrics for multi-array mmWave HMDs
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "hmdchan/channel_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace hmdchan {

namespace {

constexpr char magic[4] = {'H', 'M', 'D', 'C'};
constexpr std::uint32_t format_version = 1;

template <typename T> void write_pod(std::ostream &os, const T &v)
{
    os.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T> T read_pod(std::istream &is)
{
    T v{};
    is.read(reinterpret_cast<char *>(&v), sizeof(T));
    if (!is)
        throw std::runtime_error("channel container: truncated file");
    return v;
}

} // namespace

void write_container(const std::string &path, const ContainerMeta &meta,
                     const CtfSlice &slice)
{
    if (meta.port_map.size() != slice.M)
        throw std::invalid_argument("write_container: port map size != M");

    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("write_container: cannot open " + path);

    os.write(magic, 4);
    write_pod(os, format_version);
    write_pod(os, meta.position);
    write_pod(os, meta.scenario);
    write_pod(os, meta.snapshot);
    write_pod(os, std::uint32_t(slice.M));
    write_pod(os, std::uint32_t(slice.N));
    write_pod(os, std::uint32_t(slice.K));
    write_pod(os, meta.first_tone);
    write_pod(os, meta.tone_spacing);
    for (std::uint32_t r : meta.port_map)
        write_pod(os, r);

    for (const cdouble &v : slice.data)
    {
        float re = float(v.real()), im = float(v.imag());
        write_pod(os, re);
        write_pod(os, im);
    }
    if (!os)
        throw std::runtime_error("write_container: write failed for " + path);
}

Container read_container(const std::string &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("read_container: cannot open " + path);

    char head[4];
    is.read(head, 4);
    if (!is || std::memcmp(head, magic, 4) != 0)
        throw std::runtime_error("read_container: bad magic in " + path);
    if (read_pod<std::uint32_t>(is) != format_version)
        throw std::runtime_error("read_container: unsupported version in " + path);

    Container c;
    c.meta.position = read_pod<std::uint32_t>(is);
    c.meta.scenario = read_pod<std::uint32_t>(is);
    c.meta.snapshot = read_pod<std::uint32_t>(is);
    std::uint32_t M = read_pod<std::uint32_t>(is);
    std::uint32_t N = read_pod<std::uint32_t>(is);
    std::uint32_t K = read_pod<std::uint32_t>(is);
    c.meta.first_tone = read_pod<double>(is);
    c.meta.tone_spacing = read_pod<double>(is);
    c.meta.port_map.resize(M);
    for (std::uint32_t &r : c.meta.port_map)
        r = read_pod<std::uint32_t>(is);

    c.slice = CtfSlice(M, N, K);
    for (cdouble &v : c.slice.data)
    {
        float re = read_pod<float>(is);
        float im = read_pod<float>(is);
        v = cdouble(re, im);
    }
    return c;
}

void write_slice_csv(const std::string &path, const CtfSlice &slice)
{
    std::FILE *f = std::fopen(path.c_str(), "w");
    if (!f)
        throw std::runtime_error("write_slice_csv: cannot open " + path);
    std::fprintf(f, "m,n,k,re,im\n");
    for (std::size_t m = 0; m < slice.M; m++)
        for (std::size_t n = 0; n < slice.N; n++)
            for (std::size_t k = 0; k < slice.K; k++)
            {
                cdouble v = slice.at(m, n, k);
                std::fprintf(f, "%zu,%zu,%zu,%.9g,%.9g\n", m, n, k, v.real(), v.imag());
            }
    std::fclose(f);
}

} // namespace hmdchan
