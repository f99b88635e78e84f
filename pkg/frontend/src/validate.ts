/** Minimal JSON Schema checker covering the subset the published session
 * config schema uses: object/array shapes, numeric bounds, enums, patterns.
 * Used to validate the config form client-side before submitting. */

export interface SchemaIssue {
  path: string;
  message: string;
}

type Schema = Record<string, any>;

export function validateAgainstSchema(value: unknown, schema: Schema, path = "$"): SchemaIssue[] {
  const issues: SchemaIssue[] = [];

  if ("const" in schema && value !== schema["const"]) {
    issues.push({ path, message: `expected ${JSON.stringify(schema["const"])}` });
    return issues;
  }
  if (schema["enum"] && !schema["enum"].some((v: unknown) => v === value)) {
    issues.push({ path, message: `expected one of ${JSON.stringify(schema["enum"])}` });
    return issues;
  }
  if (schema["oneOf"]) {
    const variants: Schema[] = schema["oneOf"];
    const failures = variants.map((variant) => validateAgainstSchema(value, variant, path));
    if (!failures.some((f) => f.length === 0)) {
      issues.push({ path, message: "matched none of the allowed variants" });
    }
    return issues;
  }

  const type = schema["type"];
  if (type === "object") {
    if (typeof value !== "object" || value === null || Array.isArray(value)) {
      return [{ path, message: "expected an object" }];
    }
    const record = value as Record<string, unknown>;
    for (const key of schema["required"] ?? []) {
      if (!(key in record)) issues.push({ path: `${path}.${key}`, message: "required" });
    }
    const properties: Record<string, Schema> = schema["properties"] ?? {};
    for (const [key, item] of Object.entries(record)) {
      if (key in properties) {
        issues.push(...validateAgainstSchema(item, properties[key]!, `${path}.${key}`));
      } else if (schema["additionalProperties"] === false) {
        issues.push({ path: `${path}.${key}`, message: "unknown field" });
      }
    }
    return issues;
  }
  if (type === "array") {
    if (!Array.isArray(value)) return [{ path, message: "expected an array" }];
    if (schema["minItems"] !== undefined && value.length < schema["minItems"]) {
      issues.push({ path, message: `expected at least ${schema["minItems"]} items` });
    }
    if (schema["maxItems"] !== undefined && value.length > schema["maxItems"]) {
      issues.push({ path, message: `expected at most ${schema["maxItems"]} items` });
    }
    if (schema["items"]) {
      value.forEach((item, i) => {
        issues.push(...validateAgainstSchema(item, schema["items"], `${path}[${i}]`));
      });
    }
    return issues;
  }
  if (type === "string") {
    if (typeof value !== "string") return [{ path, message: "expected a string" }];
    if (schema["minLength"] !== undefined && value.length < schema["minLength"]) {
      issues.push({ path, message: `shorter than ${schema["minLength"]}` });
    }
    if (schema["pattern"] && !new RegExp(schema["pattern"]).test(value)) {
      issues.push({ path, message: `does not match ${schema["pattern"]}` });
    }
    return issues;
  }
  if (type === "integer" || type === "number") {
    if (typeof value !== "number" || Number.isNaN(value)) {
      return [{ path, message: "expected a number" }];
    }
    if (type === "integer" && !Number.isInteger(value)) {
      issues.push({ path, message: "expected an integer" });
    }
    if (schema["minimum"] !== undefined && value < schema["minimum"]) {
      issues.push({ path, message: `below minimum ${schema["minimum"]}` });
    }
    if (schema["maximum"] !== undefined && value > schema["maximum"]) {
      issues.push({ path, message: `above maximum ${schema["maximum"]}` });
    }
    if (schema["exclusiveMinimum"] !== undefined && value <= schema["exclusiveMinimum"]) {
      issues.push({ path, message: `must be > ${schema["exclusiveMinimum"]}` });
    }
    if (schema["exclusiveMaximum"] !== undefined && value >= schema["exclusiveMaximum"]) {
      issues.push({ path, message: `must be < ${schema["exclusiveMaximum"]}` });
    }
    return issues;
  }
  if (type === "boolean" && typeof value !== "boolean") {
    return [{ path, message: "expected a boolean" }];
  }
  return issues;
}
