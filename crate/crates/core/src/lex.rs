// Whitespace-insensitive cursor shared by the text grammars.

use crate::error::ParseError;

#[derive(Clone)]
pub(crate) struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    pub fn pos(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    pub fn rest(&mut self) -> &'a str {
        self.skip_ws();
        &self.text[self.pos..]
    }

    pub fn peek(&mut self, token: &str) -> bool {
        self.rest().starts_with(token)
    }

    pub fn eat(&mut self, token: &str) -> bool {
        if self.peek(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{token}`")))
        }
    }

    pub fn nat(&mut self) -> Result<u32, ParseError> {
        let rest = self.rest();
        let digits = rest.bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error("expected a natural number"));
        }
        let value = rest[..digits]
            .parse()
            .map_err(|_| self.error("number out of range"))?;
        self.pos += digits;
        Ok(value)
    }

    pub fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    pub fn error(&mut self, message: &str) -> ParseError {
        ParseError {
            pos: self.pos(),
            message: message.to_string(),
        }
    }
}
