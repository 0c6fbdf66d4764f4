// Minimal ordered JSON emitter used for configs and reports.
#ifndef GENPRONY_SRC_JSON_WRITER_HPP
#define GENPRONY_SRC_JSON_WRITER_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "genprony/numerics.hpp"

namespace genprony
{
struct ExperimentConfig;
}

namespace genprony::detail
{

/// "%.17g", or null for non-finite values.
inline std::string format_number(double v)
{
    if (!std::isfinite(v))
    {
        return "null";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class JsonWriter
{
public:
    void begin_object()
    {
        open('{', false);
    }

    void end_object()
    {
        close('}');
    }

    /// Inline arrays stay on one line.
    void begin_array(bool inline_items = false)
    {
        open('[', inline_items);
    }

    void end_array()
    {
        close(']');
    }

    void key(std::string_view k)
    {
        separate();
        m_out += quote(k);
        m_out += ": ";
        m_after_key = true;
    }

    void value(double v)
    {
        scalar(format_number(v));
    }

    void value(std::int64_t v)
    {
        scalar(std::to_string(v));
    }

    void value(bool v)
    {
        scalar(v ? "true" : "false");
    }

    void value(std::string_view v)
    {
        scalar(quote(v));
    }

    void value(const char* v)
    {
        scalar(quote(v));
    }

    void null()
    {
        scalar("null");
    }

    /// [re, im]
    void value(Complex v)
    {
        begin_array(true);
        value(v.real());
        value(v.imag());
        end_array();
    }

    void value(const CVector& v)
    {
        begin_array();
        for (Index i = 0; i < v.size(); ++i)
        {
            value(v(i));
        }
        end_array();
    }

    void value(const RVector& v)
    {
        begin_array();
        for (Index i = 0; i < v.size(); ++i)
        {
            value(v(i));
        }
        end_array();
    }

    std::string str() const
    {
        return m_out + "\n";
    }

private:
    struct Frame
    {
        bool inline_items;
        int count;
    };

    static std::string quote(std::string_view s)
    {
        std::string out = "\"";
        for (const char ch : s)
        {
            switch (ch)
            {
            case '"':
                out += "\\\"";
                break;
            case '\\':
                out += "\\\\";
                break;
            case '\n':
                out += "\\n";
                break;
            case '\t':
                out += "\\t";
                break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20)
                {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                }
                else
                {
                    out += ch;
                }
            }
        }
        return out + "\"";
    }

    void newline()
    {
        m_out += '\n';
        m_out.append(2 * m_stack.size(), ' ');
    }

    // Comma and line break before a new item unless it follows a key.
    void separate()
    {
        if (m_after_key)
        {
            m_after_key = false;
            return;
        }
        if (m_stack.empty())
        {
            return;
        }
        Frame& f = m_stack.back();
        if (f.count > 0)
        {
            m_out += f.inline_items ? ", " : ",";
        }
        if (!f.inline_items)
        {
            newline();
        }
        ++f.count;
    }

    void scalar(const std::string& text)
    {
        separate();
        m_out += text;
    }

    void open(char ch, bool inline_items)
    {
        const bool parent_inline = !m_stack.empty() && m_stack.back().inline_items;
        separate();
        m_out += ch;
        m_stack.push_back({inline_items || parent_inline, 0});
    }

    void close(char ch)
    {
        const Frame f = m_stack.back();
        m_stack.pop_back();
        if (!f.inline_items && f.count > 0)
        {
            newline();
        }
        m_out += ch;
    }

    std::string m_out;
    std::vector<Frame> m_stack;
    bool m_after_key = false;
};

/// Emits an experiment config as a JSON object (defined with the parser).
void write_config(JsonWriter& w, const ExperimentConfig& config);

} // namespace genprony::detail

#endif
