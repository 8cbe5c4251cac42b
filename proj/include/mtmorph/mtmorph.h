#ifndef MTMORPH_H
#define MTMORPH_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MTM_API __declspec(dllexport)
#else
#define MTM_API __attribute__((visibility("default")))
#endif

typedef struct mtm_grammar mtm_grammar;
typedef struct mtm_morphology mtm_morphology;
typedef struct mtm_result mtm_result;

typedef enum {
    MTM_OK = 0,
    MTM_ERR_ARGUMENT = 1,
    MTM_ERR_IO = 2,
    MTM_ERR_GRAMMAR = 3,
    MTM_ERR_LEXICON = 4,
    MTM_ERR_UNKNOWN_MORPHEME = 5,
    MTM_ERR_UNKNOWN_RULE = 6,
    MTM_ERR_COMPILE = 7,
    MTM_ERR_INTERNAL = 99
} mtm_status;

typedef enum { MTM_MODE_FULL = 0, MTM_MODE_ALL = 1, MTM_MODE_BARE = 2 } mtm_mode;
typedef enum { MTM_ENGINE_INTERPRETER = 0, MTM_ENGINE_AFST = 1 } mtm_engine;

/* Message of the last failed call on this thread ("" if none). */
MTM_API const char* mtm_last_error(void);
MTM_API const char* mtm_version(void);

/* Grammars are validated on load; a grammar with errors is rejected. */
MTM_API mtm_status mtm_grammar_load(const char* path, mtm_grammar** out);
MTM_API mtm_status mtm_grammar_parse(const char* text, mtm_grammar** out);
/* A copy without the named rules. */
MTM_API mtm_status mtm_grammar_without(const mtm_grammar* g, const char* const* rule_ids, size_t count,
                                       mtm_grammar** out);
MTM_API void mtm_grammar_free(mtm_grammar* g);

MTM_API size_t mtm_grammar_tape_count(const mtm_grammar* g);
MTM_API const char* mtm_grammar_tape_name(const mtm_grammar* g, size_t tape);
MTM_API int mtm_grammar_has_rule(const mtm_grammar* g, const char* rule_id);

/* One row: the canonical grammar text. */
MTM_API mtm_status mtm_grammar_print(const mtm_grammar* g, mtm_result** out);
/* Rows: severity, rule id, message (warnings only; errors fail the load). */
MTM_API mtm_status mtm_grammar_diagnostics(const mtm_grammar* g, mtm_result** out);
/* Rows: machine name, state count, transition count. */
MTM_API mtm_status mtm_grammar_compile(const mtm_grammar* g, mtm_result** out);
/* One row: the machine listing for a rule (or "default" for the merged
   default-rule machine). */
MTM_API mtm_status mtm_grammar_dump(const mtm_grammar* g, const char* rule_id, mtm_result** out);

MTM_API mtm_status mtm_morphology_open(const mtm_grammar* g, const char* lexicon_path, mtm_morphology** out);
MTM_API void mtm_morphology_free(mtm_morphology* m);

/* selection: "pattern=q3,root=dħrj,vocalism=ui,affix=a".
   Rows: surface, surface symbols (space separated), then one trace per
   derivation ("rule TAB lex TAB surf" lines). */
MTM_API mtm_status mtm_generate(const mtm_morphology* m, const char* selection, mtm_mode mode, mtm_engine engine,
                                mtm_result** out);

/* Rows: surface, one morpheme id per tape, affixes (space separated,
   "t-" / "-a"), then one trace per derivation. */
MTM_API mtm_status mtm_analyze(const mtm_morphology* m, const char* surface, mtm_mode mode, mtm_engine engine,
                               mtm_result** out);

/* Rows: status (PASS/FAIL/SKIP), form, voice, expected, generated
   (comma separated), round-trip flag. Summary: counts. */
MTM_API mtm_status mtm_verify(const mtm_morphology* m, const char* golden_path, mtm_engine engine,
                              mtm_result** out);

/* Rows: input, detail for each divergence between the two engines.
   golden_path may be NULL. Summary: item and divergence counts. */
MTM_API mtm_status mtm_equivalence(const mtm_morphology* m, const char* golden_path, size_t samples, unsigned seed,
                                   mtm_result** out);

/* One row: the text with ħ → H, ʔ → ', tone marks → ^L / ^M / ^H. */
MTM_API mtm_status mtm_to_ascii(const char* text, mtm_result** out);

MTM_API size_t mtm_result_rows(const mtm_result* r);
MTM_API size_t mtm_result_fields(const mtm_result* r, size_t row);
MTM_API const char* mtm_result_field(const mtm_result* r, size_t row, size_t field);
MTM_API const char* mtm_result_summary(const mtm_result* r);
/* Number of failed items (verify: FAIL rows; equivalence: divergences). */
MTM_API size_t mtm_result_failures(const mtm_result* r);
MTM_API void mtm_result_free(mtm_result* r);

#ifdef __cplusplus
}
#endif

#endif
